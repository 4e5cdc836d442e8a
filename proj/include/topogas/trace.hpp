#pragma once

#include "topogas/gas.hpp"
#include "topogas/position.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace topogas {

/// One observed demonstrator position.
struct Sample {
  double t = 0.0; ///< seconds
  DemonstratorId demonstrator = 0;
  Position pos;

  friend bool operator==(const Sample &, const Sample &) = default;
};

/// Samples sorted by (t, demonstrator), stable within equal keys.
struct Trace {
  std::vector<Sample> samples;
  std::optional<double> rate_hint; ///< native sampling rate in Hz, if declared

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }

  friend bool operator==(const Trace &, const Trace &) = default;
};

struct ParsedTrace {
  Trace trace;
  std::size_t skipped = 0;
  std::vector<std::size_t> skipped_lines; ///< 1-based
};

/// Line format: `t demonstrator x y z`, whitespace or comma separated. `#` starts
/// a comment; a `# rate <hz>` comment declares the native rate. Malformed lines
/// (wrong arity, unparsable or non-finite values, negative time) are skipped and counted.
ParsedTrace parse_trace(std::string_view document);
ParsedTrace read_trace_file(const std::string &path);

std::string format_trace(const Trace &trace);
void write_trace_file(const Trace &trace, const std::string &path);

/// Stable sort by (t, demonstrator).
void sort_trace(Trace &trace);

/// Zero-order-hold resampling onto a per-demonstrator uniform grid that starts
/// at that demonstrator's first timestamp and stops at its last sample.
Trace resample(const Trace &trace, double rate_hz);

/// Interleaves traces by time. Without remapping, a demonstrator id appearing in
/// two inputs is an error; with remapping, ids are renumbered 0.. in order of
/// (input index, original id).
Trace merge(std::span<const Trace> traces, bool remap_ids = false);

struct FeedResult {
  std::size_t steps = 0;
  std::size_t skipped = 0;
  std::size_t observations = 0;
};

/// Called after every `stride`-th accepted step with the gas and the sample just consumed.
using FeedObserver = std::function<void(const Gas &, const Sample &)>;

/// Steps the gas once per sample in trace order. Rejected samples are skipped and counted.
FeedResult feed(Gas &gas, const Trace &trace, std::size_t stride = 0, const FeedObserver &observer = {});

} // namespace topogas
