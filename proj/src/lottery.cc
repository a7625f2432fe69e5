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

#include "sibmatch/lottery.h"

#include <algorithm>
#include <cctype>
#include <random>

namespace sibmatch {

const char* RuleName(TieBreakingRule rule) {
  switch (rule) {
    case TieBreakingRule::kSTB:
      return "stb";
    case TieBreakingRule::kMTB:
      return "mtb";
    case TieBreakingRule::kSTBF:
      return "stb-f";
    case TieBreakingRule::kMTBF:
      return "mtb-f";
  }
  return "?";
}

std::optional<TieBreakingRule> ParseRule(const std::string& name) {
  std::string n;
  for (char ch : name) n.push_back(static_cast<char>(std::tolower(ch)));
  if (n == "stb") return TieBreakingRule::kSTB;
  if (n == "mtb") return TieBreakingRule::kMTB;
  if (n == "stb-f" || n == "stbf") return TieBreakingRule::kSTBF;
  if (n == "mtb-f" || n == "mtbf") return TieBreakingRule::kMTBF;
  return std::nullopt;
}

bool IsFamilyRule(TieBreakingRule rule) {
  return rule == TieBreakingRule::kSTBF || rule == TieBreakingRule::kMTBF;
}

LotteryProfile::LotteryProfile(int num_students, int num_schools)
    : num_students_(num_students),
      num_schools_(num_schools),
      keys_(static_cast<size_t>(num_students) * num_schools) {}

LotteryProfile LotteryProfile::FromRanking(
    const Instance& inst, const std::vector<StudentIdx>& order) {
  std::vector<std::vector<StudentIdx>> orders(inst.num_schools(), order);
  return FromSchoolRankings(inst, orders);
}

LotteryProfile LotteryProfile::FromSchoolRankings(
    const Instance& inst,
    const std::vector<std::vector<StudentIdx>>& orders) {
  const int n = inst.num_students();
  LotteryProfile lot(n, inst.num_schools());
  for (int c = 0; c < inst.num_schools(); ++c) {
    for (size_t k = 0; k < orders[c].size(); ++k) {
      lot.set_key(orders[c][k], c,
                  {static_cast<double>(k + 1) / (n + 1), 0.0});
    }
  }
  return lot;
}

bool LotteryProfile::keys_distinct() const {
  for (int c = 0; c < num_schools_; ++c) {
    std::vector<LotteryKey> ks(
        keys_.begin() + static_cast<std::ptrdiff_t>(c) * num_students_,
        keys_.begin() + static_cast<std::ptrdiff_t>(c + 1) * num_students_);
    std::sort(ks.begin(), ks.end());
    if (std::adjacent_find(ks.begin(), ks.end()) != ks.end()) return false;
  }
  return true;
}

namespace {

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  // 53 random bits; independent of the library's distribution code.
  double operator()() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace

LotteryProfile draw_lotteries(const Instance& inst, TieBreakingRule rule,
                              std::uint64_t seed) {
  const int n = inst.num_students();
  const int nc = inst.num_schools();
  const int nf = inst.num_families();
  LotteryProfile lot(n, nc);
  Uniform u(seed);
  switch (rule) {
    case TieBreakingRule::kSTB: {
      for (int s = 0; s < n; ++s) {
        LotteryKey k{u(), u()};
        for (int c = 0; c < nc; ++c) lot.set_key(s, c, k);
      }
      break;
    }
    case TieBreakingRule::kMTB: {
      for (int c = 0; c < nc; ++c) {
        for (int s = 0; s < n; ++s) lot.set_key(s, c, {u(), u()});
      }
      break;
    }
    case TieBreakingRule::kSTBF: {
      std::vector<double> fam(nf);
      for (int f = 0; f < nf; ++f) fam[f] = u();
      for (int s = 0; s < n; ++s) {
        LotteryKey k{fam[inst.student(s).family], u()};
        for (int c = 0; c < nc; ++c) lot.set_key(s, c, k);
      }
      break;
    }
    case TieBreakingRule::kMTBF: {
      std::vector<double> fam(nf);
      for (int c = 0; c < nc; ++c) {
        for (int f = 0; f < nf; ++f) fam[f] = u();
        for (int s = 0; s < n; ++s) {
          lot.set_key(s, c, {fam[inst.student(s).family], u()});
        }
      }
      break;
    }
  }
  return lot;
}

InitialOrder::InitialOrder(const Instance& inst, const LotteryProfile& lot)
    : n_(inst.num_students()),
      pos_(static_cast<size_t>(inst.num_schools()) * inst.num_students()),
      order_(inst.num_schools()) {
  for (int c = 0; c < inst.num_schools(); ++c) {
    auto& ord = order_[c];
    ord.resize(n_);
    for (int s = 0; s < n_; ++s) ord[s] = s;
    std::sort(ord.begin(), ord.end(), [&](StudentIdx a, StudentIdx b) {
      const int ga = inst.group(a, c), gb = inst.group(b, c);
      if (ga != gb) return ga < gb;
      const auto& ka = lot.key(a, c);
      const auto& kb = lot.key(b, c);
      if (ka != kb) return ka < kb;
      return a < b;
    });
    for (int k = 0; k < n_; ++k) {
      pos_[static_cast<size_t>(c) * n_ + ord[k]] = k;
    }
  }
}

std::vector<StudentIdx> initial_order(const Instance& inst,
                                      const LotteryProfile& lot,
                                      SchoolIdx c) {
  return InitialOrder(inst, lot).order(c);
}

}  // namespace sibmatch
