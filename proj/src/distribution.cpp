#include "ubisim/distribution.hpp"

#include <cmath>
#include <cstdio>

namespace ubisim {

IndividualIncomeView make_view(const Population& population, const BaselineResult& baseline,
                               const ReformOutcome* outcome) {
  if (baseline.population_fingerprint != population.fingerprint())
    throw InconsistentInputs("make_view: baseline computed on a different population");
  if (outcome && outcome->population_fingerprint != population.fingerprint())
    throw InconsistentInputs("make_view: reform outcome computed on a different population");
  const auto n = static_cast<Eigen::Index>(population.person_count());
  IndividualIncomeView v;
  v.weight.resize(n);
  v.weight_micros.resize(n);
  v.age.resize(n);
  v.pc_baseline.resize(n);
  v.pc_reform.resize(n);
  v.order_key.resize(n);

  std::vector<std::pair<const PersonRecord*, Eigen::Index>> ids;
  ids.reserve(static_cast<std::size_t>(n));
  std::vector<Money> base_incomes;
  std::vector<Money> reform_incomes;
  population.for_each_household([&](const Household& h, std::size_t first) {
    base_incomes.clear();
    reform_incomes.clear();
    for (std::size_t m = 0; m < h.members.size(); ++m) {
      base_incomes.push_back(baseline.persons[first + m].disposable);
      reform_incomes.push_back(outcome ? outcome->persons[first + m].disposable : baseline.persons[first + m].disposable);
    }
    const Money pc_base = per_capita(base_incomes);
    const Money pc_reform = per_capita(reform_incomes);
    for (std::size_t m = 0; m < h.members.size(); ++m) {
      const auto i = static_cast<Eigen::Index>(first + m);
      const auto& p = h.members[m];
      v.weight(i) = p.weight.value();
      v.weight_micros(i) = p.weight.micros();
      v.age(i) = p.age;
      v.pc_baseline(i) = pc_base.cents();
      v.pc_reform(i) = pc_reform.cents();
      ids.emplace_back(&p, i);
    }
  });
  std::sort(ids.begin(), ids.end(), [](const auto& a, const auto& b) {
    if (a.first->household_id != b.first->household_id) return a.first->household_id < b.first->household_id;
    return a.first->person_id < b.first->person_id;
  });
  for (std::size_t r = 0; r < ids.size(); ++r) v.order_key(ids[r].second) = static_cast<int>(r);
  return v;
}

const char* to_string(AgeGroup group) {
  switch (group) {
    case AgeGroup::All: return "total";
    case AgeGroup::Children: return "children";
    case AgeGroup::WorkingAge: return "working_age";
    case AgeGroup::Elderly: return "elderly";
  }
  return "unknown";
}

bool in_group(int age, AgeGroup group) {
  switch (group) {
    case AgeGroup::All: return true;
    case AgeGroup::Children: return age < 18;
    case AgeGroup::WorkingAge: return age >= 18 && age <= 64;
    case AgeGroup::Elderly: return age >= 65;
  }
  return false;
}

std::optional<double> poverty_headcount(const IndividualIncomeView& view, Money line, IncomeSide side, AgeGroup group) {
  if (line <= Money{}) throw std::invalid_argument("poverty_headcount: line must be positive");
  const MoneyArray& income = side == IncomeSide::Baseline ? view.pc_baseline : view.pc_reform;
  int128_t group_w = 0;
  int128_t poor_w = 0;
  for (Eigen::Index i = 0; i < view.size(); ++i) {
    if (!in_group(view.age(i), group)) continue;
    group_w += view.weight_micros(i);
    if (income(i) < line.cents()) poor_w += view.weight_micros(i);
  }
  if (group_w == 0) return std::nullopt;
  return static_cast<double>(static_cast<long double>(poor_w) / static_cast<long double>(group_w));
}

DecileAssignment assign_deciles(const IndividualIncomeView& view) {
  const Eigen::Index n = view.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (view.pc_baseline(a) != view.pc_baseline(b)) return view.pc_baseline(a) < view.pc_baseline(b);
    return view.order_key(a) < view.order_key(b);
  });
  int128_t total = 0;
  for (Eigen::Index i = 0; i < n; ++i) total += view.weight_micros(i);
  DecileAssignment out;
  out.decile.resize(n);
  if (total <= 0) return out;
  std::array<int128_t, 10> decile_w{};
  int128_t cum = 0;
  for (Eigen::Index i : order) {
    const int128_t w = view.weight_micros(i);
    // ceil(10 * midpoint / W), midpoint = cum + w/2
    const int128_t num = 10 * (2 * cum + w);
    const int128_t den = 2 * total;
    int d = static_cast<int>((num + den - 1) / den);
    d = std::clamp(d, 1, 10);
    out.decile(i) = d;
    decile_w[static_cast<std::size_t>(d - 1)] += w;
    cum += w;
  }
  const long double target = static_cast<long double>(total) / 10.0L;
  for (std::size_t d = 0; d < 10; ++d) {
    out.weight[d] = static_cast<double>(static_cast<long double>(decile_w[d]) / Weight::kScale);
    const long double dev = std::abs(static_cast<long double>(decile_w[d]) - target) / target;
    if (dev > 0.005L) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "decile %zu weight deviates %.2f%% from an even split", d + 1,
                    static_cast<double>(dev * 100));
      out.warnings.emplace_back(buf);
    }
  }
  return out;
}

namespace {

struct Accumulator {
  int128_t total = 0;
  int128_t win_w = 0, lose_w = 0, same_w = 0;
  int128_t win_base = 0, win_delta = 0;  // Σ w * centavos
  int128_t lose_base = 0, lose_delta = 0;

  void add(std::int64_t w, std::int64_t base, std::int64_t delta) {
    total += w;
    if (delta > kWinnerEpsilon.cents()) {
      win_w += w;
      win_base += static_cast<int128_t>(w) * base;
      win_delta += static_cast<int128_t>(w) * delta;
    } else if (delta < -kWinnerEpsilon.cents()) {
      lose_w += w;
      lose_base += static_cast<int128_t>(w) * base;
      lose_delta += static_cast<int128_t>(w) * -delta;
    } else {
      same_w += w;
    }
  }

  WinnerLoserRow row(std::string label) const {
    auto share = [&](int128_t part) {
      return total == 0 ? 0.0 : static_cast<double>(100.0L * static_cast<long double>(part) / static_cast<long double>(total));
    };
    auto mean_reais = [](int128_t sum, int128_t w) -> std::optional<double> {
      if (w == 0) return std::nullopt;
      return static_cast<double>(static_cast<long double>(sum) / static_cast<long double>(w) / 100.0L);
    };
    WinnerLoserRow r;
    r.label = std::move(label);
    r.weight = static_cast<double>(static_cast<long double>(total) / Weight::kScale);
    r.winners_micros = static_cast<std::int64_t>(win_w);
    r.losers_micros = static_cast<std::int64_t>(lose_w);
    r.unchanged_micros = static_cast<std::int64_t>(same_w);
    r.winners_pct = share(win_w);
    r.losers_pct = share(lose_w);
    r.unchanged_pct = share(same_w);
    r.winners_baseline = mean_reais(win_base, win_w);
    r.mean_gain = mean_reais(win_delta, win_w);
    r.losers_baseline = mean_reais(lose_base, lose_w);
    r.mean_loss = mean_reais(lose_delta, lose_w);
    return r;
  }
};

}  // namespace

WinnerLoserReport winners_losers(const IndividualIncomeView& view, const DecileAssignment& assignment) {
  if (assignment.decile.size() != view.size())
    throw InconsistentInputs("winners_losers: decile assignment does not match the view");
  std::array<Accumulator, 10> per_decile;
  Accumulator all;
  for (Eigen::Index i = 0; i < view.size(); ++i) {
    const std::int64_t delta = view.pc_reform(i) - view.pc_baseline(i);
    per_decile[static_cast<std::size_t>(assignment.decile(i) - 1)].add(view.weight_micros(i), view.pc_baseline(i), delta);
    all.add(view.weight_micros(i), view.pc_baseline(i), delta);
  }
  WinnerLoserReport out;
  for (std::size_t d = 0; d < 10; ++d) out.deciles[d] = per_decile[d].row(std::to_string(d + 1));
  out.all = all.row("All deciles");
  return out;
}

}  // namespace ubisim
