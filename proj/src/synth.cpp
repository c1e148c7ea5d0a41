#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>

#include "ubisim/error.hpp"
#include "ubisim/microdata.hpp"

namespace ubisim {

namespace {

// mt19937_64 output is fixed by the standard; the std:: distributions are
// not, so the transforms below are spelled out to keep populations
// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }
  bool bernoulli(double p) { return uniform() < p; }

  double normal() {
    // Box-Muller, one variate per call.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }
  // Pareto with scale 1.
  double pareto(double alpha) { return std::pow(1.0 - uniform(), -1.0 / alpha); }

  std::size_t categorical(const std::vector<double>& probs, double total) {
    double u = uniform() * total;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (u < probs[i]) return i;
      u -= probs[i];
    }
    return probs.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

enum class Band { Child, Working, Elderly };

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("InvalidSpec: " + what);
}

bool probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

void validate(const SynthSpec& s) {
  require(s.n_households >= 1, "n_households must be >= 1");
  require(!s.household_size.empty(), "household_size distribution is empty");
  double size_total = 0.0;
  for (double p : s.household_size) {
    require(std::isfinite(p) && p >= 0.0, "household_size probabilities must be non-negative");
    size_total += p;
  }
  require(size_total > 0.0, "household_size distribution has zero mass");
  const auto& a = s.ages;
  for (double p : {a.children, a.working_age, a.elderly})
    require(std::isfinite(p) && p >= 0.0, "age mixture shares must be non-negative");
  require(a.working_age + a.elderly > 0.0, "age mixture must include adults");
  require(std::isfinite(s.weight_min) && s.weight_min > 0.0 && s.weight_max >= s.weight_min &&
              std::isfinite(s.weight_max),
          "weights must satisfy 0 < weight_min <= weight_max");
  require(probability(s.elderly_partner_rate), "elderly_partner_rate must be in [0,1]");
  const auto& in = s.income;
  for (double p : {in.employment_rate, in.elderly_employment_rate, in.pareto_share, in.elderly_pension_rate,
                   in.working_pension_rate, in.family_benefit_takeup, in.unemployment_benefit_rate})
    require(probability(p), "income probabilities must be in [0,1]");
  require(std::isfinite(in.log_mean) && std::isfinite(in.pension_log_mean), "log means must be finite");
  require(std::isfinite(in.log_sd) && in.log_sd > 0.0, "log_sd must be positive");
  require(std::isfinite(in.pension_log_sd) && in.pension_log_sd > 0.0, "pension_log_sd must be positive");
  require(std::isfinite(in.pareto_alpha) && in.pareto_alpha > 1.0, "pareto_alpha must exceed 1");
  for (double m : {in.minimum_pension, in.family_benefit_per_child, in.family_benefit_base, in.family_benefit_line,
                   in.unemployment_benefit_amount})
    require(std::isfinite(m) && m >= 0.0, "benefit amounts must be non-negative");
}

Money to_money(double reais) { return round_half_up_centavos(static_cast<long double>(reais) * 100.0L); }

}  // namespace

Population synth_generate(const SynthSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const auto& in = spec.income;
  const double size_total = std::accumulate(spec.household_size.begin(), spec.household_size.end(), 0.0);
  const std::vector<double> all_bands = {spec.ages.children, spec.ages.working_age, spec.ages.elderly};
  const std::vector<double> adult_bands = {0.0, spec.ages.working_age, spec.ages.elderly};
  const double all_total = all_bands[0] + all_bands[1] + all_bands[2];
  const double adult_total = adult_bands[1] + adult_bands[2];

  std::vector<Household> households;
  households.reserve(spec.n_households);
  char id[32];
  for (std::size_t h = 0; h < spec.n_households; ++h) {
    std::snprintf(id, sizeof id, "H%07zu", h + 1);
    Household hh{id, {}};
    const std::size_t size = rng.categorical(spec.household_size, size_total) + 1;
    const Weight weight = Weight::from_double(rng.uniform(spec.weight_min, spec.weight_max));

    std::vector<Band> bands;
    bands.push_back(static_cast<Band>(rng.categorical(adult_bands, adult_total)));
    for (std::size_t m = 1; m < size; ++m) {
      if (m == 1 && bands.front() == Band::Elderly && spec.ages.elderly > 0.0 &&
          rng.bernoulli(spec.elderly_partner_rate)) {
        bands.push_back(Band::Elderly);
      } else {
        bands.push_back(static_cast<Band>(rng.categorical(all_bands, all_total)));
      }
    }

    int children = 0;
    Money market_total;
    for (std::size_t m = 0; m < bands.size(); ++m) {
      PersonRecord p;
      std::snprintf(id, sizeof id, "-%02zu", m + 1);
      p.household_id = hh.household_id;
      p.person_id = hh.household_id + id;
      p.weight = weight;
      switch (bands[m]) {
        case Band::Child:
          p.age = rng.integer(0, 17);
          ++children;
          break;
        case Band::Working: {
          p.age = rng.integer(18, 64);
          if (rng.bernoulli(in.employment_rate)) {
            double wage = rng.lognormal(in.log_mean, in.log_sd);
            if (rng.bernoulli(in.pareto_share)) wage *= rng.pareto(in.pareto_alpha);
            p.market_income = to_money(wage);
          } else if (rng.bernoulli(in.unemployment_benefit_rate)) {
            p.other_benefit_income = to_money(in.unemployment_benefit_amount);
          }
          if (rng.bernoulli(in.working_pension_rate))
            p.pension_income = to_money(std::max(in.minimum_pension, rng.lognormal(in.pension_log_mean, in.pension_log_sd)));
          break;
        }
        case Band::Elderly:
          p.age = rng.integer(65, 95);
          if (rng.bernoulli(in.elderly_employment_rate))
            p.market_income = to_money(0.8 * rng.lognormal(in.log_mean, in.log_sd));
          if (rng.bernoulli(in.elderly_pension_rate))
            p.pension_income = to_money(std::max(in.minimum_pension, rng.lognormal(in.pension_log_mean, in.pension_log_sd)));
          break;
      }
      market_total += p.market_income;
      hh.members.push_back(std::move(p));
    }

    const double market_pc = market_total.to_reais() / static_cast<double>(hh.members.size());
    if (children > 0 && market_pc < in.family_benefit_line && rng.bernoulli(in.family_benefit_takeup)) {
      hh.members.front().other_benefit_income +=
          to_money(in.family_benefit_base + in.family_benefit_per_child * children);
    }
    households.push_back(std::move(hh));
  }
  return Population(std::move(households), Provenance{Provenance::Kind::Synthetic, spec.seed});
}

}  // namespace ubisim
