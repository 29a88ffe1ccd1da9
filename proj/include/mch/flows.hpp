/*!
  \file flows.hpp
  \brief Named synthesis presets, end-to-end flows and the benchmark harness
*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mch/choices.hpp"
#include "mch/mapper.hpp"
#include "mch/network.hpp"
#include "mch/verify.hpp"

namespace mch
{

/*! \brief Choice construction and mapping mode bundled under one name. */
struct mch_preset
{
  std::string name;
  mch_params mch;
  /*! \brief Representations whose templates feed the strategies. */
  std::vector<repr_tag> reprs;
  map_mode mode{ map_mode::balanced };
};

/*! \brief `balanced` (r = 0.8, XMG arena, all representations), `delay` (XAG, r = 0.5)
 * or `area` (XMG arena over AIG and XMG templates). Throws `std::invalid_argument` otherwise.
 */
mch_preset preset_named( std::string_view name );

/*! \brief Choices for `net`; the arena is the join of the preset's mix and the input's representation. */
choice_network build_preset( logic_network const& net, mch_preset const& preset, mch_stats* stats = nullptr );

/*! \brief Flow identifiers accepted by `run_flow`. */
std::vector<std::string> known_flows();

struct flow_result
{
  /*! \brief LUT count, cell area, or node count for graph mapping. */
  double area{ 0.0 };
  /*! \brief LUT levels, cell arrival time, or network level. */
  double delay{ 0.0 };
  double seconds{ 0.0 };
  equivalence_verdict::status verified{ equivalence_verdict::status::unknown };
};

/*! \brief Runs one flow and checks the result against `net` with `cec`.
 *
 * Flows: `lut` and `mch-lut` (6-LUTs), `cell`, `mch-delay`, `mch-balanced`,
 * `mch-area` (cells from `lib`), and `graphmap-<repr>` (iterative graph
 * mapping into `<repr>`). Throws `std::invalid_argument` for unknown names.
 */
flow_result run_flow( std::string_view flow, logic_network const& net, cell_library const& lib );

struct bench_row
{
  std::string benchmark;
  std::string flow;
  double area{ 0.0 };
  double delay{ 0.0 };
  double time_s{ 0.0 };
  /*! \brief `EQUIVALENT`, `UNKNOWN`, `NOT_EQUIVALENT`, or `error: <message>`. */
  std::string verified;
};

using bench_suite = std::vector<std::pair<std::string, logic_network>>;

/*! \brief Every `.aig` and `.aag` file of `dir`, sorted by name (benchmark name is the file stem). */
bench_suite load_suite( std::filesystem::path const& dir );

/*! \brief One row per benchmark and flow; a failing flow is recorded and the run continues. */
std::vector<bench_row> run_bench( bench_suite const& suite, std::vector<std::string> const& flows,
                                  cell_library const& lib );

/*! \brief Geometric means per flow over the rows that did not fail.
 *
 * The row's benchmark is `geomean` and `verified` reads `<equivalent rows>/<rows>`.
 */
std::vector<bench_row> geomean_rows( std::vector<bench_row> const& rows );

/*! \brief CSV `benchmark,flow,area,delay,time_s,verified` with the geomean rows appended. */
std::string bench_csv( std::vector<bench_row> const& rows );

} // namespace mch
