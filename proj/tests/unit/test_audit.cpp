#include "support.hpp"

#include <algorithm>

#include "bvlab/audit.hpp"

using namespace bvlab;

TEST_CASE("every invariant suite passes on the default corpus") {
    const auto report = run_audit(AuditConfig{});
    CHECK(report.pass());
    CHECK(report.suites.size() == 11);
    for (const auto& s : report.suites) {
        INFO(s.name << ": " << s.detail);
        CHECK(s.pass());
        CHECK(s.samples > 0);
    }
}

TEST_CASE("the broken profile fixture trips only the chain rule") {
    AuditConfig cfg;
    cfg.fixture = "broken_chi";
    const auto report = run_audit(cfg);
    CHECK_FALSE(report.pass());
    CHECK(report.failed() == std::vector<std::string>{"chain_rule"});
}

TEST_CASE("audit determinism, threads and empty corpora") {
    AuditConfig a;
    a.corpus_size = 10;
    a.group_pairs = 20;
    AuditConfig b = a;
    b.threads = 4;
    const auto ra = run_audit(a);
    const auto rb = run_audit(b);
    REQUIRE(ra.suites.size() == rb.suites.size());
    for (std::size_t i = 0; i < ra.suites.size(); ++i) {
        CHECK(ra.suites[i].samples == rb.suites[i].samples);
        CHECK(ra.suites[i].worst == rb.suites[i].worst);
    }
    AuditConfig empty;
    empty.corpus_size = 0;
    const auto re = run_audit(empty);
    CHECK(re.pass());
    CHECK_FALSE(re.warnings.empty());
    AuditConfig bad;
    bad.fixture = "nonsense";
    CHECK(testing::throws_kind(ErrorKind::Config, [&] { run_audit(bad); }));
}
