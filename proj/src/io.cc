// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sibmatch/io.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "sibmatch/error.h"

namespace sibmatch {

namespace {

std::string Trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::vector<std::string>> ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

std::string AsString(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error(ErrorCode::kValidation, where + ": expected a string");
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

double ParseDouble(const std::string& s, const std::string& where) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error(ErrorCode::kIoError, where + ": not a number '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (ch == '"') {
      // A doubled quote inside a quoted field is a literal quote.
      if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else {
        quoted = !quoted;
      }
    } else if (ch == ',' && !quoted) {
      out.push_back(Trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(Trim(cur));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

InstanceSpec instance_spec_from_json(const Json& doc) {
  InstanceSpec spec;
  if (!doc.is_object()) {
    throw Error(ErrorCode::kValidation, "instance must be a JSON object");
  }
  try {
    for (const auto& l : doc.at("levels")) {
      spec.levels.push_back(AsString(l, "levels"));
    }
    for (const auto& c : doc.at("schools")) {
      SchoolSpec sc;
      sc.id = AsString(c.at("id"), "schools.id");
      for (const auto& [lvl, q] : c.at("capacity").items()) {
        if (!q.is_number_integer()) {
          throw Error(ErrorCode::kValidation,
                      "schools[" + sc.id + "].capacity: expected integer");
        }
        sc.capacity.emplace_back(lvl, q.get<std::int64_t>());
      }
      spec.schools.push_back(std::move(sc));
    }
    for (const auto& s : doc.at("students")) {
      StudentSpec ss;
      ss.id = AsString(s.at("id"), "students.id");
      ss.family = AsString(s.at("family"), "students.family");
      ss.level = AsString(s.at("level"), "students.level");
      for (const auto& p : s.at("prefs")) {
        ss.prefs.push_back(AsString(p, "students.prefs"));
      }
      spec.students.push_back(std::move(ss));
    }
    if (doc.contains("groups")) {
      for (const auto& g : doc.at("groups")) {
        spec.groups.push_back({AsString(g.at("student"), "groups.student"),
                               AsString(g.at("school"), "groups.school"),
                               g.at("g").get<int>()});
      }
    }
    if (doc.contains("num_groups")) {
      spec.num_groups = doc.at("num_groups").get<int>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kValidation,
                std::string("malformed instance: ") + e.what());
  }
  return spec;
}

Json instance_to_json(const Instance& inst) {
  const InstanceSpec spec = inst.to_spec();
  Json doc;
  doc["levels"] = spec.levels;
  Json schools = Json::array();
  for (const auto& c : spec.schools) {
    Json cap = Json::object();
    for (const auto& [l, q] : c.capacity) cap[l] = q;
    schools.push_back({{"id", c.id}, {"capacity", cap}});
  }
  doc["schools"] = schools;
  Json students = Json::array();
  for (const auto& s : spec.students) {
    students.push_back({{"id", s.id},
                        {"family", s.family},
                        {"level", s.level},
                        {"prefs", s.prefs}});
  }
  doc["students"] = students;
  if (!spec.groups.empty() || spec.num_groups > 1) {
    Json groups = Json::array();
    for (const auto& g : spec.groups) {
      groups.push_back({{"student", g.student}, {"school", g.school},
                        {"g", g.g}});
    }
    doc["groups"] = groups;
    doc["num_groups"] = spec.num_groups;
  }
  return doc;
}

Instance read_instance_json(const std::string& path) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kValidation,
                path + ": invalid JSON: " + e.what());
  }
  return validate_instance(instance_spec_from_json(doc));
}

InstanceSpec instance_spec_from_csv(const std::string& students_csv,
                                    const std::string& schools_csv) {
  InstanceSpec spec;
  auto school_rows = ParseCsv(schools_csv);
  auto student_rows = ParseCsv(students_csv);
  if (school_rows.empty() || student_rows.empty()) {
    throw Error(ErrorCode::kValidation, "CSV inputs need a header row");
  }
  std::map<std::string, size_t> school_pos;
  std::vector<std::string> level_order;
  for (size_t r = 1; r < school_rows.size(); ++r) {
    const auto& row = school_rows[r];
    if (row.size() != 3) {
      throw Error(ErrorCode::kValidation,
                  "schools.csv line " + std::to_string(r + 1) +
                      ": expected id,level,capacity");
    }
    auto [it, inserted] = school_pos.emplace(row[0], spec.schools.size());
    if (inserted) spec.schools.push_back({row[0], {}});
    long long q = 0;
    auto [p, ec] =
        std::from_chars(row[2].data(), row[2].data() + row[2].size(), q);
    if (ec != std::errc() || p != row[2].data() + row[2].size()) {
      throw Error(ErrorCode::kValidation,
                  "schools.csv line " + std::to_string(r + 1) +
                      ": capacity is not an integer");
    }
    spec.schools[it->second].capacity.emplace_back(row[1], q);
    if (std::find(level_order.begin(), level_order.end(), row[1]) ==
        level_order.end()) {
      level_order.push_back(row[1]);
    }
  }
  for (size_t r = 1; r < student_rows.size(); ++r) {
    const auto& row = student_rows[r];
    if (row.size() < 3) {
      throw Error(ErrorCode::kValidation,
                  "students.csv line " + std::to_string(r + 1) +
                      ": expected id,family,level,prefs...");
    }
    StudentSpec ss{row[0], row[1], row[2], {}};
    for (size_t k = 3; k < row.size(); ++k) {
      if (!row[k].empty()) ss.prefs.push_back(row[k]);
    }
    if (std::find(level_order.begin(), level_order.end(), row[2]) ==
        level_order.end()) {
      level_order.push_back(row[2]);
    }
    spec.students.push_back(std::move(ss));
  }
  // Numeric labels sort numerically; otherwise keep first-appearance order.
  bool numeric = std::all_of(level_order.begin(), level_order.end(),
                             [](const std::string& l) {
                               return !l.empty() &&
                                      std::all_of(l.begin(), l.end(), ::isdigit);
                             });
  if (numeric) {
    std::sort(level_order.begin(), level_order.end(),
              [](const std::string& a, const std::string& b) {
                return std::stoll(a) < std::stoll(b);
              });
  }
  spec.levels = level_order;
  return spec;
}

std::string lotteries_to_csv(const Instance& inst, const LotteryProfile& lot) {
  std::string out = "student,school,family_draw,member_draw\n";
  for (StudentIdx s : students_by_id(inst)) {
    for (int c = 0; c < inst.num_schools(); ++c) {
      const auto& k = lot.key(s, c);
      out += inst.student(s).id + "," + inst.school(c).id + "," +
             FormatDouble(k.family_draw) + "," + FormatDouble(k.member_draw) +
             "\n";
    }
  }
  return out;
}

LotteryProfile lotteries_from_csv(const Instance& inst,
                                  const std::string& text) {
  auto rows = ParseCsv(text);
  LotteryProfile lot(inst.num_students(), inst.num_schools());
  std::vector<char> seen(static_cast<size_t>(inst.num_students()) *
                             inst.num_schools(),
                         0);
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "lotteries.csv line " + std::to_string(r + 1);
    if (row.size() != 4) throw Error(ErrorCode::kIoError, where + ": 4 columns");
    const int s = inst.student_index(row[0]);
    const int c = inst.school_index(row[1]);
    if (s < 0 || c < 0) {
      throw Error(ErrorCode::kIoError, where + ": unknown student or school");
    }
    lot.set_key(s, c, {ParseDouble(row[2], where), ParseDouble(row[3], where)});
    seen[static_cast<size_t>(s) * inst.num_schools() + c] = 1;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw Error(ErrorCode::kIoError,
                "lotteries.csv must give a key for every student and school");
  }
  return lot;
}

std::vector<StudentIdx> students_by_id(const Instance& inst) {
  std::vector<StudentIdx> out(inst.num_students());
  for (int s = 0; s < inst.num_students(); ++s) out[s] = s;
  std::sort(out.begin(), out.end(), [&](StudentIdx a, StudentIdx b) {
    return inst.student(a).id < inst.student(b).id;
  });
  return out;
}

Json matching_to_json(const Instance& inst, const Matching& mu,
                      const PairList* providers) {
  Json doc;
  Json rows = Json::array();
  for (StudentIdx s : students_by_id(inst)) {
    Json row;
    row["student"] = inst.student(s).id;
    if (mu[s] == kUnassigned) {
      row["school"] = nullptr;
    } else {
      row["school"] = inst.school(mu[s]).id;
    }
    rows.push_back(row);
  }
  doc["assignments"] = rows;
  if (providers != nullptr) {
    PairList sorted = *providers;
    std::sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
      const auto& ia = inst.student(a.first).id;
      const auto& ib = inst.student(b.first).id;
      if (ia != ib) return ia < ib;
      return inst.school(a.second).id < inst.school(b.second).id;
    });
    Json z = Json::array();
    for (const auto& [s, c] : sorted) {
      z.push_back({{"student", inst.student(s).id},
                   {"school", inst.school(c).id}});
    }
    doc["providers"] = z;
  }
  return doc;
}

std::string matching_to_csv(const Instance& inst, const Matching& mu) {
  std::string out = "student,school\n";
  for (StudentIdx s : students_by_id(inst)) {
    out += inst.student(s).id;
    out += ',';
    if (mu[s] != kUnassigned) out += inst.school(mu[s]).id;
    out += '\n';
  }
  return out;
}

Matching matching_from_json(const Instance& inst, const Json& doc,
                            PairList* providers) {
  Matching mu(inst.num_students(), kUnassigned);
  try {
    for (const auto& row : doc.at("assignments")) {
      const int s = inst.student_index(row.at("student").get<std::string>());
      if (s < 0) {
        throw Error(ErrorCode::kInvalidMatching,
                    "unknown student " + row.at("student").dump());
      }
      const auto& sc = row.at("school");
      if (sc.is_null()) continue;
      const int c = inst.school_index(sc.get<std::string>());
      if (c < 0) {
        throw Error(ErrorCode::kInvalidMatching, "unknown school " + sc.dump());
      }
      mu[s] = c;
    }
    if (providers != nullptr && doc.contains("providers")) {
      for (const auto& row : doc.at("providers")) {
        const int s = inst.student_index(row.at("student").get<std::string>());
        const int c = inst.school_index(row.at("school").get<std::string>());
        if (s < 0 || c < 0) {
          throw Error(ErrorCode::kInconsistentZ,
                      "unknown provider pair " + row.dump());
        }
        providers->emplace_back(s, c);
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidMatching,
                std::string("malformed matching: ") + e.what());
  }
  return mu;
}

}  // namespace sibmatch
