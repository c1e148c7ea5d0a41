#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ubisim {

__extension__ typedef __int128 int128_t;

// Signed currency amount in integer centavos (BRL). Monthly unless stated.
class Money {
 public:
  constexpr Money() = default;
  static constexpr Money centavos(std::int64_t c) { Money m; m.value_ = c; return m; }
  static constexpr Money reais(std::int64_t r) { return centavos(r * 100); }

  // Exact parse of a decimal string with at most two fraction digits,
  // e.g. "406", "-12.5", "1203.07". Throws std::invalid_argument.
  static Money parse(std::string_view text);

  constexpr std::int64_t cents() const { return value_; }
  constexpr double to_reais() const { return static_cast<double>(value_) / 100.0; }

  // "1234.50", "-0.07"
  std::string str() const;

  constexpr Money operator-() const { return centavos(-value_); }
  constexpr Money& operator+=(Money o) { value_ += o.value_; return *this; }
  constexpr Money& operator-=(Money o) { value_ -= o.value_; return *this; }
  friend constexpr Money operator+(Money a, Money b) { return a += b; }
  friend constexpr Money operator-(Money a, Money b) { return a -= b; }
  friend constexpr Money operator*(Money a, std::int64_t k) { return centavos(a.value_ * k); }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  std::int64_t value_ = 0;
};

constexpr Money max(Money a, Money b) { return a < b ? b : a; }
constexpr Money min(Money a, Money b) { return a < b ? a : b; }

// floor(x + 0.5), for an amount already expressed in centavos.
Money round_half_up_centavos(long double centavos);

// Survey expansion factor, fixed point with six decimals.
class Weight {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Weight() = default;
  static constexpr Weight micro(std::int64_t m) { Weight w; w.micro_ = m; return w; }
  // Decimal parse; digits beyond the sixth decimal are rounded half-up.
  static Weight parse(std::string_view text);
  static Weight from_double(double w);

  constexpr std::int64_t micros() const { return micro_; }
  constexpr double value() const { return static_cast<double>(micro_) / kScale; }
  std::string str() const;

  friend constexpr auto operator<=>(Weight, Weight) = default;

 private:
  std::int64_t micro_ = 0;
};

// Exact weighted money aggregate. Units: 1e-6 centavo, i.e. the product of
// a micro-weight and a centavo amount, so sums of w * money never round.
class WeightedTotal {
 public:
  constexpr WeightedTotal() = default;
  static constexpr WeightedTotal raw(int128_t units) { WeightedTotal t; t.units_ = units; return t; }
  static constexpr WeightedTotal of(Weight w, Money m, std::int64_t periods = 1) {
    return raw(static_cast<int128_t>(w.micros()) * m.cents() * periods);
  }
  // Unit-weight total of a money amount.
  static constexpr WeightedTotal money(Money m) { return of(Weight::micro(Weight::kScale), m); }
  static WeightedTotal billions(double reais_billions);

  constexpr int128_t units() const { return units_; }
  double to_reais() const;
  double to_billions() const { return to_reais() / 1e9; }
  // Exact decimal reais with eight fraction digits.
  std::string exact_str() const;
  // Whole reais, half-up.
  int128_t round_reais() const;
  int128_t round_billions() const;

  constexpr WeightedTotal& operator+=(WeightedTotal o) { units_ += o.units_; return *this; }
  constexpr WeightedTotal& operator-=(WeightedTotal o) { units_ -= o.units_; return *this; }
  friend constexpr WeightedTotal operator+(WeightedTotal a, WeightedTotal b) { return a += b; }
  friend constexpr WeightedTotal operator-(WeightedTotal a, WeightedTotal b) { return a -= b; }
  constexpr WeightedTotal operator-() const { return raw(-units_); }
  friend constexpr auto operator<=>(WeightedTotal, WeightedTotal) = default;

 private:
  int128_t units_ = 0;
};

constexpr WeightedTotal abs(WeightedTotal t) { return t.units() < 0 ? -t : t; }

// Months per year used to annualize monthly microdata.
inline constexpr std::int64_t kMonthsPerYear = 12;

// Half-up integer division for a positive divisor.
int128_t div_round_half_up(int128_t numerator, int128_t divisor);

std::string int128_str(int128_t v);

}  // namespace ubisim
