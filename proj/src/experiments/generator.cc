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


#include "sibmatch/experiments/generator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>

#include "sibmatch/error.h"

namespace sibmatch {
namespace {

std::string Label(char prefix, int k, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*d", prefix, width, k);
  return buf;
}

int Width(int n) { return static_cast<int>(std::to_string(n).size()); }

void CheckDistribution(const std::vector<double>& w, const char* name,
                       std::vector<std::string>& errors) {
  if (w.empty()) {
    errors.push_back(std::string(name) + ": empty");
    return;
  }
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) errors.push_back(std::string(name) + ": negative weight");
    sum += v;
  }
  if (!(sum > 0.0)) errors.push_back(std::string(name) + ": zero total");
}

}  // namespace

void validate_generator_config(const GeneratorConfig& c) {
  std::vector<std::string> errors;
  if (c.num_students <= 0) errors.push_back("num_students must be positive");
  if (c.num_schools <= 0) errors.push_back("num_schools must be positive");
  if (!(c.capacity_scale > 0.0)) errors.push_back("capacity_scale must be positive");
  if (!(c.sibling_overlap >= 0.0 && c.sibling_overlap <= 1.0))
    errors.push_back("sibling_overlap must lie in [0,1]");
  if (!(c.popularity_skew >= 0.0)) errors.push_back("popularity_skew must be >= 0");
  CheckDistribution(c.level_weights, "level_weights", errors);
  CheckDistribution(c.list_length_weights, "list_length_weights", errors);
  CheckDistribution(c.family_share, "family_share", errors);
  if (c.family_share.size() > 3) errors.push_back("family_share: at most 3 entries");
  double total = std::accumulate(c.family_share.begin(), c.family_share.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) errors.push_back("family_share must sum to 1");
  if (!errors.empty())
    throw Error(ErrorCode::kValidation, "invalid generator config", errors);
}

Instance generate(const GeneratorConfig& c) {
  validate_generator_config(c);
  std::mt19937_64 gen(c.seed);
  const int n = c.num_students;
  const int num_levels = static_cast<int>(c.level_weights.size());

  InstanceSpec spec;
  for (int l = 0; l < num_levels; ++l) spec.levels.push_back(Label('l', l + 1, 1));

  // Families: a family of size k is drawn with weight share_k / k so that
  // the expected share of students matches family_share.
  std::vector<double> fam_w;
  for (size_t k = 0; k < c.family_share.size(); ++k)
    fam_w.push_back(c.family_share[k] / static_cast<double>(k + 1));
  std::discrete_distribution<int> fam_size(fam_w.begin(), fam_w.end());
  std::vector<int> sizes;
  for (int placed = 0; placed < n;) {
    int k = std::min(fam_size(gen) + 1, n - placed);
    sizes.push_back(k);
    placed += k;
  }

  std::discrete_distribution<int> level(c.level_weights.begin(),
                                        c.level_weights.end());
  std::discrete_distribution<int> length(c.list_length_weights.begin(),
                                         c.list_length_weights.end());

  // Popularity: a random permutation of schools, weighted by rank.
  std::vector<int> perm(c.num_schools);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), gen);
  std::vector<double> pop(c.num_schools);
  for (int j = 0; j < c.num_schools; ++j)
    pop[perm[j]] = std::pow(static_cast<double>(j + 1), -c.popularity_skew);

  auto draw_list = [&](int len, std::vector<int> forced) {
    // Weighted sampling without replacement, keeping forced entries.
    std::vector<double> w = pop;
    for (int s : forced) w[s] = 0.0;
    std::vector<int> out = std::move(forced);
    while (static_cast<int>(out.size()) < len) {
      double total = std::accumulate(w.begin(), w.end(), 0.0);
      if (total <= 0.0) break;
      std::discrete_distribution<int> pick(w.begin(), w.end());
      int s = pick(gen);
      out.push_back(s);
      w[s] = 0.0;
    }
    return out;
  };

  const int sw = Width(n);
  const int fw = Width(static_cast<int>(sizes.size()));
  const int cw = Width(c.num_schools);
  std::vector<int> per_level(num_levels, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int next = 0;
  for (size_t f = 0; f < sizes.size(); ++f) {
    std::vector<int> first;
    for (int m = 0; m < sizes[f]; ++m) {
      int len = std::min(length(gen) + 1, c.num_schools);
      std::vector<int> list;
      if (m == 0) {
        list = draw_list(len, {});
        first = list;
      } else {
        std::vector<int> kept;
        for (int s : first)
          if (static_cast<int>(kept.size()) < len && unit(gen) < c.sibling_overlap)
            kept.push_back(s);
        list = draw_list(len, kept);
        // Copied entries keep their relative order but need not lead.
        std::shuffle(list.begin() + static_cast<long>(kept.size()), list.end(), gen);
        std::vector<int> merged;
        size_t a = 0, b = kept.size();
        while (a < kept.size() || b < list.size()) {
          bool take_kept = b >= list.size() ||
                           (a < kept.size() && unit(gen) < 0.5);
          merged.push_back(take_kept ? list[a++] : list[b++]);
        }
        list = std::move(merged);
      }
      StudentSpec st;
      st.id = Label('s', ++next, sw);
      st.family = Label('f', static_cast<int>(f) + 1, fw);
      int l = level(gen);
      ++per_level[l];
      st.level = spec.levels[l];
      for (int s : list) st.prefs.push_back(Label('c', s + 1, cw));
      spec.students.push_back(std::move(st));
    }
  }

  // Seats of each level spread evenly over schools, remainder at random.
  std::vector<std::vector<std::int64_t>> cap(
      c.num_schools, std::vector<std::int64_t>(num_levels, 0));
  std::uniform_int_distribution<int> any_school(0, c.num_schools - 1);
  for (int l = 0; l < num_levels; ++l) {
    auto seats = static_cast<std::int64_t>(
        std::llround(c.capacity_scale * per_level[l]));
    for (int s = 0; s < c.num_schools; ++s) cap[s][l] = seats / c.num_schools;
    for (std::int64_t r = seats % c.num_schools; r > 0; --r) ++cap[any_school(gen)][l];
  }
  for (int s = 0; s < c.num_schools; ++s) {
    SchoolSpec sc;
    sc.id = Label('c', s + 1, cw);
    for (int l = 0; l < num_levels; ++l)
      sc.capacity.emplace_back(spec.levels[l], cap[s][l]);
    spec.schools.push_back(std::move(sc));
  }
  return validate_instance(spec);
}

GeneratorConfig generator_config_from_json(const Json& doc) {
  GeneratorConfig c;
  try {
    c.num_students = doc.value("num_students", c.num_students);
    c.family_share = doc.value("family_share", c.family_share);
    c.level_weights = doc.value("level_weights", c.level_weights);
    c.num_schools = doc.value("num_schools", c.num_schools);
    c.capacity_scale = doc.value("capacity_scale", c.capacity_scale);
    c.list_length_weights = doc.value("list_length_weights", c.list_length_weights);
    c.popularity_skew = doc.value("popularity_skew", c.popularity_skew);
    c.sibling_overlap = doc.value("sibling_overlap", c.sibling_overlap);
    c.seed = doc.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kValidation,
                std::string("generator config: ") + e.what());
  }
  validate_generator_config(c);
  return c;
}

Json generator_config_to_json(const GeneratorConfig& c) {
  Json doc;
  doc["num_students"] = c.num_students;
  doc["family_share"] = c.family_share;
  doc["level_weights"] = c.level_weights;
  doc["num_schools"] = c.num_schools;
  doc["capacity_scale"] = c.capacity_scale;
  doc["list_length_weights"] = c.list_length_weights;
  doc["popularity_skew"] = c.popularity_skew;
  doc["sibling_overlap"] = c.sibling_overlap;
  doc["seed"] = c.seed;
  return doc;
}

}  // namespace sibmatch
