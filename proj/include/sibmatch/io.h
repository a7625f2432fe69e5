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

#ifndef SIBMATCH_IO_H_
#define SIBMATCH_IO_H_

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sibmatch/instance.h"
#include "sibmatch/lottery.h"

namespace sibmatch {

using Json = nlohmann::ordered_json;

// Instance <-> JSON document.
InstanceSpec instance_spec_from_json(const Json& doc);
Json instance_to_json(const Instance& inst);
Instance read_instance_json(const std::string& path);

// students.csv (id,family,level,pref1..prefK) + schools.csv (id,level,capacity)
InstanceSpec instance_spec_from_csv(const std::string& students_csv,
                                    const std::string& schools_csv);

// lotteries.csv: student,school,family_draw,member_draw
std::string lotteries_to_csv(const Instance& inst, const LotteryProfile& lot);
LotteryProfile lotteries_from_csv(const Instance& inst, const std::string& text);

// (s, c) pairs such as provider flags.
using PairList = std::vector<std::pair<StudentIdx, SchoolIdx>>;

// {"assignments":[{"student","school"|null}], "providers":[...]}; students are
// emitted sorted by id.
Json matching_to_json(const Instance& inst, const Matching& mu,
                      const PairList* providers = nullptr);
// Missing students are unassigned. `providers` receives the optional list.
// "student,school" rows in student id order; unassigned is an empty field.
std::string matching_to_csv(const Instance& inst, const Matching& mu);
Matching matching_from_json(const Instance& inst, const Json& doc,
                            PairList* providers = nullptr);

// Student indices sorted by external id.
std::vector<StudentIdx> students_by_id(const Instance& inst);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// Splits one CSV line on commas; trims surrounding whitespace.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace sibmatch

#endif  // SIBMATCH_IO_H_
