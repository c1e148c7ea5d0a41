#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ubisim/microdata.hpp"
#include "ubisim/money.hpp"

namespace fixtures {

using ubisim::Money;
using ubisim::PersonRecord;
using ubisim::Population;
using ubisim::Weight;

inline Money R(const char* text) { return Money::parse(text); }

struct P {
  std::string hh;
  int age = 30;
  double weight = 1.0;
  const char* market = "0";
  const char* pension = "0";
  const char* other = "0";
  std::optional<const char*> pit{};
  std::optional<const char*> ssc{};
};

// Persons keep their order; ids are assigned per household.
inline Population make_population(const std::vector<P>& persons) {
  std::vector<ubisim::Household> households;
  for (const auto& p : persons) {
    auto it = std::find_if(households.begin(), households.end(), [&](const auto& h) { return h.household_id == p.hh; });
    if (it == households.end()) {
      households.push_back({p.hh, {}});
      it = households.end() - 1;
    }
    PersonRecord r;
    r.household_id = p.hh;
    r.person_id = p.hh + "-" + std::to_string(it->members.size() + 1);
    r.age = p.age;
    r.weight = Weight::from_double(p.weight);
    r.market_income = R(p.market);
    r.pension_income = R(p.pension);
    r.other_benefit_income = R(p.other);
    if (p.pit) r.baseline_pit = R(*p.pit);
    if (p.ssc) r.baseline_ssc = R(*p.ssc);
    it->members.push_back(r);
  }
  return Population(std::move(households), {});
}

inline ubisim::SynthSpec synth(std::size_t households, std::uint64_t seed) {
  ubisim::SynthSpec s;
  s.n_households = households;
  s.seed = seed;
  return s;
}

// Small deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  std::int64_t centavos(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
  }

 private:
  std::mt19937_64 eng_;
};

// Random valid population with `households` households.
inline Population random_population(Gen& g, int households, bool with_tax_columns = false) {
  std::vector<ubisim::Household> hs;
  for (int h = 0; h < households; ++h) {
    ubisim::Household hh;
    hh.household_id = "R" + std::to_string(h);
    const Weight w = Weight::micro(g.centavos(500'000, 8'000'000));
    const int n = g.integer(1, 5);
    for (int i = 0; i < n; ++i) {
      PersonRecord p;
      p.household_id = hh.household_id;
      p.person_id = hh.household_id + "-" + std::to_string(i);
      p.age = g.integer(0, 95);
      p.weight = w;
      p.market_income = Money::centavos(g.chance(0.4) ? 0 : g.centavos(0, 1'500'000));
      p.pension_income = Money::centavos(p.age >= 60 && g.chance(0.7) ? g.centavos(93'700, 600'000) : 0);
      p.other_benefit_income = Money::centavos(g.chance(0.2) ? g.centavos(0, 60'000) : 0);
      if (with_tax_columns) {
        p.baseline_pit = Money::centavos(g.centavos(0, p.market_income.cents() / 5));
        p.baseline_ssc = Money::centavos(g.centavos(0, p.market_income.cents() / 10));
      }
      hh.members.push_back(p);
    }
    hs.push_back(std::move(hh));
  }
  return Population(std::move(hs), {});
}

}  // namespace fixtures
