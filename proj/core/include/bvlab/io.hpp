#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "bvlab/bv.hpp"
#include "bvlab/counterexample.hpp"
#include "bvlab/grid.hpp"
#include "bvlab/group.hpp"
#include "bvlab/layers.hpp"
#include "bvlab/profiles.hpp"
#include "bvlab/radial.hpp"
#include "bvlab/rearrange.hpp"

namespace bvlab {

inline constexpr int kSchemaVersion = 1;

// Grid file: "BVGRID1\n", int32 dim, int32 level, int64 origin[dim], int64 extents[dim],
// then the row-major values as little-endian IEEE doubles. A JSON sidecar "<path>.json"
// carries schema_version, the header fields and caller provenance.

void write_grid(const std::filesystem::path& path, const GridFunction& u, const nlohmann::json& provenance = {});
GridFunction read_grid(const std::filesystem::path& path);
std::string encode_grid(const GridFunction& u);
GridFunction decode_grid(const std::string& bytes, const std::string& source = "<memory>");

/// %.17g, which round-trips every double.
std::string format_double(double v);
/// "inf" for infinite q, shortest round-trip text otherwise; used as JSON keys and CSV headers.
std::string q_label(double q);

/// Header "value,measure,cumulative_measure".
void write_stepfunction_csv(std::ostream& out, const StepFunction& u);
/// Reads the first two columns; errors name the source and line.
StepFunction read_stepfunction_csv(std::istream& in, const std::string& source);
StepFunction read_stepfunction_csv(const std::filesystem::path& path);

/// Header "r_in,r_out,value".
void write_radial_csv(std::ostream& out, const RadialStep& u);
nlohmann::json to_json(const RadialStep& u);

nlohmann::json to_json(const GroupElement& g);
GroupElement group_element_from_json(const nlohmann::json& j, int dim);

nlohmann::json to_json(const TVReport& r);
/// Header "cube_0[,cube_1[,cube_2]],tv".
void write_tv_per_cube_csv(std::ostream& out, const TVReport& r);
nlohmann::json to_json(const ChainReport& r);
nlohmann::json to_json(const BVEmbeddingAudit& a);
nlohmann::json to_json(const NestedAudit& a);
nlohmann::json to_json(const LayerAudit& a);
nlohmann::json to_json(const TruncationProfile& chi);

/// Header "n,tv_coarea,tv_piecewise,l1star,lorentz_q<q>...,f0".
void write_counterexample_csv(std::ostream& out, const CounterexampleResult& r);
nlohmann::json to_json(const CounterexampleResult& r);
/// Gnuplot script plotting the Lorentz columns of `csv_name` on log-log axes.
std::string counterexample_gnuplot(const CounterexampleResult& r, const std::string& csv_name);
nlohmann::json to_json(const CocompactnessTable& t);

/// dir/sequence.json plus one grid file per term.
void write_sequence(const std::filesystem::path& dir, const SequenceSpec& seq);
SequenceSpec read_sequence(const std::filesystem::path& dir);

nlohmann::json to_json(const SeparationReport& r);
nlohmann::json to_json(const EnergyReport& r);
/// dir/profile_<n>.bvg per profile and dir/decomposition.json with group sequences and norms.
void write_decomposition(const std::filesystem::path& dir, const ProfileDecomposition& d,
                         const nlohmann::json& extra = {});

}  // namespace bvlab
