#include "topogas/trace.hpp"

#include "../common/files.hpp"
#include "../common/text.hpp"
#include "topogas/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace topogas {

namespace {

bool sample_less(const Sample &a, const Sample &b) {
  if (a.t != b.t) return a.t < b.t;
  return a.demonstrator < b.demonstrator;
}

std::optional<Sample> parse_record(std::string_view line) {
  const auto f = text::split(line, " \t\r,");
  if (f.size() != 5) return std::nullopt;
  const auto t = text::parse_double(f[0]);
  const auto demo = text::parse_int<DemonstratorId>(f[1]);
  const auto x = text::parse_double(f[2]);
  const auto y = text::parse_double(f[3]);
  const auto z = text::parse_double(f[4]);
  if (!t || !demo || !x || !y || !z) return std::nullopt;
  Sample s{*t, *demo, {*x, *y, *z}};
  if (!std::isfinite(s.t) || s.t < 0.0 || !is_finite(s.pos)) return std::nullopt;
  return s;
}

} // namespace

void sort_trace(Trace &trace) { std::stable_sort(trace.samples.begin(), trace.samples.end(), sample_less); }

ParsedTrace parse_trace(std::string_view document) {
  ParsedTrace out;
  text::LineReader lines(document);
  std::string_view line;
  while (lines.next(line)) {
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) {
      const auto f = text::split(line.substr(hash + 1));
      if (f.size() == 2 && f[0] == "rate")
        if (auto hz = text::parse_double(f[1]); hz && *hz > 0.0 && std::isfinite(*hz)) out.trace.rate_hint = hz;
    }
    const auto body = text::trim(text::strip_comment(line));
    if (body.empty()) continue;
    if (auto s = parse_record(body)) {
      out.trace.samples.push_back(*s);
    } else {
      ++out.skipped;
      out.skipped_lines.push_back(lines.line_number());
    }
  }
  sort_trace(out.trace);
  return out;
}

ParsedTrace read_trace_file(const std::string &path) { return parse_trace(files::read_all(path)); }

std::string format_trace(const Trace &trace) {
  std::ostringstream out;
  out << "# t demonstrator x y z\n";
  if (trace.rate_hint) out << "# rate " << text::format_double(*trace.rate_hint) << '\n';
  for (const Sample &s : trace.samples)
    out << text::format_double(s.t) << ' ' << s.demonstrator << ' ' << text::format_double(s.pos.x) << ' '
        << text::format_double(s.pos.y) << ' ' << text::format_double(s.pos.z) << '\n';
  return out.str();
}

void write_trace_file(const Trace &trace, const std::string &path) { files::write_all(path, format_trace(trace)); }

Trace resample(const Trace &trace, double rate_hz) {
  if (!(std::isfinite(rate_hz) && rate_hz > 0.0)) throw ConfigError("resample rate must be a positive number");
  Trace out;
  out.rate_hint = rate_hz;
  if (trace.empty()) return out;

  std::map<DemonstratorId, std::vector<const Sample *>> by_demo;
  for (const Sample &s : trace.samples) by_demo[s.demonstrator].push_back(&s);

  for (auto &[demo, samples] : by_demo) {
    std::stable_sort(samples.begin(), samples.end(), [](const Sample *a, const Sample *b) { return a->t < b->t; });
    const double t0 = samples.front()->t;
    const double last = samples.back()->t;
    std::size_t held = 0;
    for (std::uint64_t k = 0;; ++k) {
      const double grid = t0 + static_cast<double>(k) / rate_hz;
      // Grid times computed by division rarely land bit-exactly on recorded timestamps.
      const double slack = 1e-9 * std::max(1.0, std::abs(grid));
      if (grid > last + slack) break;
      while (held + 1 < samples.size() && samples[held + 1]->t <= grid + slack) ++held;
      out.samples.push_back(Sample{grid, demo, samples[held]->pos});
    }
  }
  sort_trace(out);
  return out;
}

Trace merge(std::span<const Trace> traces, bool remap_ids) {
  Trace out;
  if (remap_ids) {
    DemonstratorId next = 0;
    for (const Trace &t : traces) {
      std::map<DemonstratorId, DemonstratorId> mapping;
      for (const Sample &s : t.samples) mapping.emplace(s.demonstrator, 0);
      for (auto &entry : mapping) entry.second = next++;
      for (Sample s : t.samples) {
        s.demonstrator = mapping.at(s.demonstrator);
        out.samples.push_back(s);
      }
    }
  } else {
    std::map<DemonstratorId, std::size_t> owner;
    for (std::size_t i = 0; i < traces.size(); ++i) {
      for (const Sample &s : traces[i].samples) {
        auto [it, fresh] = owner.emplace(s.demonstrator, i);
        if (!fresh && it->second != i)
          throw ConfigError("demonstrator id " + std::to_string(s.demonstrator) + " appears in traces " +
                            std::to_string(it->second) + " and " + std::to_string(i));
        out.samples.push_back(s);
      }
    }
  }
  std::set<double> rates;
  for (const Trace &t : traces)
    if (t.rate_hint) rates.insert(*t.rate_hint);
  if (rates.size() == 1 && std::all_of(traces.begin(), traces.end(), [](const Trace &t) { return t.rate_hint; }))
    out.rate_hint = *rates.begin();
  sort_trace(out);
  return out;
}

FeedResult feed(Gas &gas, const Trace &trace, std::size_t stride, const FeedObserver &observer) {
  FeedResult result;
  for (const Sample &s : trace.samples) {
    try {
      gas.step(s.pos, s.demonstrator);
    } catch (const InputError &) {
      ++result.skipped;
      continue;
    }
    ++result.steps;
    if (stride > 0 && observer && result.steps % stride == 0) {
      observer(gas, s);
      ++result.observations;
    }
  }
  return result;
}

} // namespace topogas
