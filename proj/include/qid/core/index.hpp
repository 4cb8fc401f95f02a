#pragma once

#include <compare>
#include <string>

namespace qid {

/// Lorentz labels run over 4 values with η = diag(−1,1,1,1); inner labels
/// run over the symbolic dimension D with the Euclidean metric δ.
enum class Space : unsigned char { lorentz, inner };
enum class Variance : unsigned char { upper, lower };

struct IndexLabel {
  std::string name;
  Space space = Space::lorentz;
  Variance variance = Variance::upper;

  auto operator<=>(const IndexLabel&) const = default;

  [[nodiscard]] IndexLabel flipped() const {
    return {name, space, variance == Variance::upper ? Variance::lower : Variance::upper};
  }
  [[nodiscard]] IndexLabel with_name(std::string n) const { return {std::move(n), space, variance}; }
  [[nodiscard]] bool same_slot(const IndexLabel& o) const { return name == o.name && space == o.space; }
};

inline IndexLabel lor_up(std::string n) { return {std::move(n), Space::lorentz, Variance::upper}; }
inline IndexLabel lor_lo(std::string n) { return {std::move(n), Space::lorentz, Variance::lower}; }
inline IndexLabel inn_up(std::string n) { return {std::move(n), Space::inner, Variance::upper}; }
inline IndexLabel inn_lo(std::string n) { return {std::move(n), Space::inner, Variance::lower}; }

inline const char* space_name(Space s) { return s == Space::lorentz ? "lorentz" : "inner"; }

}  // namespace qid
