#include "irlteach/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "irlteach/common.hpp"

namespace irlteach {
namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json spec_json(const EnvironmentSpec& s) {
  json j;
  j["goal"] = to_string(s.goal);
  j["offset"] = s.other_car_offset;
  j["lane"] = to_string(s.other_car_lane);
  j["v0"] = s.other_car_v0;
  j["accel_time"] = s.accel_time;
  j["vf"] = s.other_car_vf ? json(*s.other_car_vf) : json(nullptr);
  return j;
}

EnvironmentSpec spec_from(const json& j) {
  EnvironmentSpec s;
  s.goal = parse_goal(j.at("goal").get<std::string>());
  s.other_car_offset = j.at("offset").get<int>();
  s.other_car_lane = parse_lane(j.at("lane").get<std::string>());
  s.other_car_v0 = j.at("v0").get<int>();
  s.accel_time = j.at("accel_time").get<double>();
  if (!j.at("vf").is_null()) s.other_car_vf = j.at("vf").get<int>();
  if (!is_valid(s)) throw IoError("record describes a spec outside the catalog");
  return s;
}

json traj_json(const Trajectory& t) {
  json states = json::array();
  for (const VehicleState& s : t.states) states.push_back({s.x, s.y, s.heading, s.v, s.alpha});
  json controls = json::array();
  for (const ControlInput& u : t.controls) controls.push_back({u.u1, u.u2});
  return {{"dt", t.dt}, {"states", states}, {"controls", controls}};
}

Trajectory traj_from(const json& j) {
  Trajectory t;
  t.dt = j.at("dt").get<double>();
  for (const json& s : j.at("states")) {
    if (s.size() != 5) throw IoError("state record must have 5 values");
    t.states.push_back({s[0].get<double>(), s[1].get<double>(), s[2].get<double>(),
                        s[3].get<double>(), s[4].get<double>()});
  }
  for (const json& u : j.at("controls")) {
    if (u.size() != 2) throw IoError("control record must have 2 values");
    t.controls.push_back({u[0].get<double>(), u[1].get<double>()});
  }
  return t;
}

json parse_line(std::string_view line) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed record: ") + e.what());
  }
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed record: ") + e.what());
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string spec_record(const EnvironmentSpec& spec) {
  json j = spec_json(spec);
  j["index"] = catalog_index(spec);
  j["class"] = to_string(classify_environment(spec).kind);
  return j.dump();
}

EnvironmentSpec parse_spec_record(std::string_view line) {
  const json j = parse_line(line);
  return guarded([&] { return spec_from(j); });
}

void write_catalog(std::ostream& out, const std::vector<EnvironmentSpec>& specs) {
  for (const EnvironmentSpec& s : specs) out << spec_record(s) << '\n';
}

std::vector<EnvironmentSpec> read_catalog(std::istream& in) {
  std::vector<EnvironmentSpec> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_spec_record(line));
  }
  return out;
}

std::map<std::string, std::size_t> class_census(const std::vector<EnvironmentSpec>& specs) {
  std::map<std::string, std::size_t> census;
  for (EnvClassKind k : {EnvClassKind::Merging, EnvClassKind::Braking, EnvClassKind::Tailgating,
                         EnvClassKind::Other}) {
    census[std::string(to_string(k))] = 0;
  }
  for (const EnvironmentSpec& s : specs) {
    ++census[std::string(to_string(classify_environment(s).kind))];
  }
  census["total"] = specs.size();
  return census;
}

void write_census_csv(std::ostream& out, const std::map<std::string, std::size_t>& census) {
  out << "class,count\n";
  for (const char* k : {"Merging", "Braking", "Tailgating", "Other", "total"}) {
    const auto it = census.find(k);
    out << k << ',' << (it == census.end() ? 0 : it->second) << '\n';
  }
}

SequenceRecord to_record(const TeachingSequence& seq, const LearnerSpec& scoring) {
  SequenceRecord r;
  r.generator = seq.generator;
  r.learner = scoring.id();
  r.learner_param = scoring.param;
  for (StrategyVariant v : seq.uncoverable) r.uncoverable.emplace_back(to_string(v));
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const TeachingExample& e = seq.entries[i];
    r.entries.push_back({e.spec, e.catalog_index, e.label, seq.posterior_trace[i], e.demo});
  }
  return r;
}

void write_sequence(std::ostream& out, const SequenceRecord& r) {
  json head{{"type", "sequence"},
            {"generator", r.generator},
            {"learner", r.learner},
            {"learner_param", r.learner_param},
            {"length", r.entries.size()},
            {"uncoverable", r.uncoverable}};
  out << head.dump() << '\n';
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    const SequenceEntryRecord& e = r.entries[i];
    json j{{"type", "example"},
           {"position", i},
           {"index", e.catalog_index},
           {"spec", spec_json(e.spec)},
           {"class", to_string(e.label.env_class)},
           {"strategy", to_string(e.label.variant)},
           {"fallback", e.label.fallback},
           {"posterior", e.posterior},
           {"trajectory", traj_json(e.trajectory)}};
    out << j.dump() << '\n';
  }
}

SequenceRecord read_sequence(std::istream& in) {
  SequenceRecord r;
  std::string line;
  if (!std::getline(in, line)) throw IoError("sequence file is empty");
  return guarded([&] {
    const json head = parse_line(line);
    if (head.at("type") != "sequence") throw IoError("sequence file lacks its header record");
    r.generator = head.at("generator").get<std::string>();
    r.learner = head.at("learner").get<std::string>();
    r.learner_param = head.at("learner_param").get<double>();
    r.uncoverable = head.at("uncoverable").get<std::vector<std::string>>();
    const std::size_t length = head.at("length").get<std::size_t>();
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = parse_line(line);
      if (j.at("type") != "example") throw IoError("unexpected record type in sequence file");
      SequenceEntryRecord e;
      e.spec = spec_from(j.at("spec"));
      e.catalog_index = j.at("index").get<std::size_t>();
      if (e.catalog_index != catalog_index(e.spec)) throw IoError("record index disagrees with spec");
      e.label.env_class = parse_class(j.at("class").get<std::string>());
      e.label.variant = parse_variant(j.at("strategy").get<std::string>());
      e.label.fallback = j.at("fallback").get<bool>();
      e.posterior = j.at("posterior").get<double>();
      e.trajectory = traj_from(j.at("trajectory"));
      r.entries.push_back(std::move(e));
    }
    if (r.entries.size() != length) throw IoError("sequence file is truncated");
    return r;
  });
}

void write_matrix_csv(std::ostream& out, const EvalMatrix& m) {
  out << "generator";
  for (const std::string& c : m.col_labels) out << ',' << c;
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << m.row_labels[r];
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out << ',' << (m.degenerate[r][c] ? std::string("degenerate") : fmt(m.cells[r][c]));
    }
    out << '\n';
  }
}

EvalMatrix read_matrix_csv(std::istream& in) {
  EvalMatrix m;
  std::string line;
  if (!std::getline(in, line)) throw IoError("matrix file is empty");
  std::vector<std::string> head = split_csv(line);
  if (head.empty() || head[0] != "generator") throw IoError("matrix header must start with generator");
  m.col_labels.assign(head.begin() + 1, head.end());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != head.size()) throw IoError("matrix row has the wrong number of cells");
    m.row_labels.push_back(cells[0]);
    std::vector<double> row;
    std::vector<bool> flags;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c] == "degenerate") {
        row.push_back(0.0);
        flags.push_back(true);
        continue;
      }
      double v = 0.0;
      const auto res = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
      if (res.ec != std::errc() || res.ptr != cells[c].data() + cells[c].size()) {
        throw IoError("matrix cell is not a number: " + cells[c]);
      }
      row.push_back(v);
      flags.push_back(false);
    }
    m.cells.push_back(std::move(row));
    m.degenerate.push_back(std::move(flags));
  }
  return m;
}

void write_tallies_csv(std::ostream& out, const std::vector<std::string>& generators,
                       const std::vector<TallyGrid>& grids) {
  out << "generator,slot,Merging,Braking,Tailgating,Other\n";
  for (std::size_t g = 0; g < grids.size(); ++g) {
    for (std::size_t slot = 0; slot < 2; ++slot) {
      out << generators[g] << ',' << slot;
      for (int n : grids[g][slot]) out << ',' << n;
      out << '\n';
    }
  }
}

void write_beliefs_csv(std::ostream& out, const std::vector<std::string>& generators,
                       const std::vector<std::string>& learners, const std::vector<Belief>& beliefs) {
  out << "generator,learner,theta,w0,w1,w2,w3,w4,mass\n";
  for (std::size_t b = 0; b < beliefs.size(); ++b) {
    for (std::size_t i = 0; i < beliefs[b].size(); ++i) {
      out << generators[b] << ',' << learners[b] << ',' << i;
      for (double w : beliefs[b].thetas()[i].w) out << ',' << fmt(w);
      out << ',' << fmt(beliefs[b].masses()[i]) << '\n';
    }
  }
}

void write_test_environments(std::ostream& out, const TestEnvironmentSet& tests) {
  for (const TestEnvironment& te : tests.environments) {
    for (std::size_t j = 0; j < te.options.size(); ++j) {
      json rec{{"type", "test_option"},
               {"target", to_string(te.target)},
               {"index", catalog_index(te.spec)},
               {"spec", spec_json(te.spec)},
               {"option", j},
               {"correct", j == te.correct_index},
               {"strategy", to_string(te.option_labels[j].variant)},
               {"theta_star_gap", te.option_gaps[j]},
               {"threshold", tests.threshold},
               {"trajectory", traj_json(te.options[j])}};
      out << rec.dump() << '\n';
    }
  }
}

std::string trajectory_json(const Trajectory& traj) { return traj_json(traj).dump(); }

Trajectory parse_trajectory_json(std::string_view text) {
  const json j = parse_line(text);
  return guarded([&] { return traj_from(j); });
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

void write_manifest(std::ostream& out, const RunManifest& m) {
  out << "# irlteach run manifest\n";
  out << "tool=" << m.tool_version << '\n';
  for (const auto& [k, v] : m.config) out << "config." << k << '=' << v << '\n';
  for (const auto& [cmd, files] : m.digests) {
    for (const auto& [file, sha] : files) out << "digest." << cmd << '.' << file << '=' << sha << '\n';
  }
}

RunManifest read_manifest(std::istream& in) {
  RunManifest m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("manifest line lacks '=': " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "tool") {
      m.tool_version = value;
    } else if (key.rfind("config.", 0) == 0) {
      m.config.emplace_back(key.substr(7), value);
    } else if (key.rfind("digest.", 0) == 0) {
      const std::string rest = key.substr(7);
      const auto dot = rest.find('.');
      if (dot == std::string::npos) throw IoError("manifest digest key malformed: " + key);
      m.digests[rest.substr(0, dot)][rest.substr(dot + 1)] = value;
    } else {
      throw IoError("unknown manifest key: " + key);
    }
  }
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace irlteach
