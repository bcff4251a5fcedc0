#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "irlteach/environment_catalog.hpp"
#include "irlteach/evaluation_harness.hpp"
#include "irlteach/teaching_engine.hpp"

namespace irlteach {

/// Failure to read or write an output artifact.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Line-delimited JSON records. Doubles are written in shortest round-trip
// form, so every reader below recovers exactly what was written.

std::string spec_record(const EnvironmentSpec& spec);
EnvironmentSpec parse_spec_record(std::string_view line);

void write_catalog(std::ostream& out, const std::vector<EnvironmentSpec>& specs);
std::vector<EnvironmentSpec> read_catalog(std::istream& in);

/// Per-class counts keyed by class name, plus "total".
std::map<std::string, std::size_t> class_census(const std::vector<EnvironmentSpec>& specs);
void write_census_csv(std::ostream& out, const std::map<std::string, std::size_t>& census);

/// A sequence as stored on disk: enough to re-derive every example.
struct SequenceEntryRecord {
  EnvironmentSpec spec;
  std::size_t catalog_index = 0;
  StrategyLabel label;
  double posterior = 0.0;
  Trajectory trajectory;
};

struct SequenceRecord {
  std::string generator;
  std::string learner;  // learner id whose posterior the trace reports
  double learner_param = 0.0;
  std::vector<std::string> uncoverable;
  std::vector<SequenceEntryRecord> entries;
};

SequenceRecord to_record(const TeachingSequence& seq, const LearnerSpec& scoring);
void write_sequence(std::ostream& out, const SequenceRecord& record);
SequenceRecord read_sequence(std::istream& in);

/// Header row of learner ids; degenerate cells are written as "degenerate".
void write_matrix_csv(std::ostream& out, const EvalMatrix& m);
EvalMatrix read_matrix_csv(std::istream& in);

void write_tallies_csv(std::ostream& out, const std::vector<std::string>& generators,
                       const std::vector<TallyGrid>& grids);

/// Header `generator,learner,theta,w0..w4,mass`; one row per candidate.
void write_beliefs_csv(std::ostream& out, const std::vector<std::string>& generators,
                       const std::vector<std::string>& learners, const std::vector<Belief>& beliefs);

/// One JSON line per option of every test environment.
void write_test_environments(std::ostream& out, const TestEnvironmentSet& tests);

std::string trajectory_json(const Trajectory& traj);
Trajectory parse_trajectory_json(std::string_view json);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::string& path);

/// Human-readable `key=value` manifest.
struct RunManifest {
  std::string tool_version;
  std::vector<std::pair<std::string, std::string>> config;
  std::map<std::string, std::map<std::string, std::string>> digests;  // command -> file -> sha
};

void write_manifest(std::ostream& out, const RunManifest& m);
RunManifest read_manifest(std::istream& in);

std::string read_file(const std::string& path);
/// Throws IoError when the file cannot be written completely.
void write_file(const std::string& path, std::string_view content);

}  // namespace irlteach
