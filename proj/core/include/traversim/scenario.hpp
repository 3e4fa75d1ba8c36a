/*
 * scenario.hpp
 *
 * Scenario file ingestion. The format is a sectioned key = value text file
 * ([world], [robot], [sensors], [probe], [fusion], [planner], [run]) with
 * '#' comments; list entries (box, ramp, semantic, bearing) repeat their
 * key. Unknown keys and duplicate sections are rejected. scenario_to_text
 * echoes a parsed scenario with every default applied, and parsing that echo
 * reproduces the scenario exactly.
 */

#ifndef TRAVERSIM_SCENARIO_HPP
#define TRAVERSIM_SCENARIO_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "traversim/simulation.hpp"

namespace traversim {

struct Scenario {
  WorldSpec world{};
  SimConfig sim{};
  std::int64_t max_ticks = 2000;
  int snapshot_every = 0;  // 0 = snapshots only at probes and at the end
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& field, const std::string& msg)
      : std::runtime_error("invalid '" + field + "': " + msg), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

Scenario parse_scenario_text(std::string_view text);
Scenario parse_scenario(const std::filesystem::path& file);

/// Canonical text form with all defaults spelled out.
std::string scenario_to_text(const Scenario& s);

}  // namespace traversim

#endif  // TRAVERSIM_SCENARIO_HPP
