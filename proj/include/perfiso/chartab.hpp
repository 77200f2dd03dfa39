#pragma once

#include <memory>
#include <string>
#include <vector>

#include "perfiso/cyclotomic.hpp"

#include <nlohmann/json_fwd.hpp>

namespace perfiso {

struct ClassData {
  std::string label;
  unsigned long size = 1;
  unsigned long element_order = 1;
  unsigned long centralizer_order = 1;
  bool is_2regular = true; // element order odd
};

/// Conjugacy-class data plus the square matrix of irreducible character
/// values.  Values are stored lifted to the table conductor.  Immutable after
/// construction.
struct CharTable {
  std::string group_label;
  unsigned long group_order = 1;
  unsigned long exponent = 1;  // group exponent; context conductors come from it
  unsigned long conductor = 1; // all values live in Q(zeta_conductor)
  std::vector<ClassData> classes;
  std::vector<std::vector<CycNum>> values; // [char][class]

  int num_classes() const { return int(classes.size()); }
  int num_chars() const { return int(values.size()); }
  const CycNum &value(int chi, int cls) const { return values[chi][cls]; }
  mpz_class degree(int chi) const;

  /// Row and column orthogonality, class equation, integral degrees.
  /// Throws std::logic_error on any failure.
  void validate() const;

  /// Index of the character whose value row equals the given one, or -1.
  int index_of_value_row(const std::vector<CycNum> &row) const;

  nlohmann::json to_json() const;
  static CharTable from_json(const nlohmann::json &j);
};

using TablePtr = std::shared_ptr<const CharTable>;

TablePtr cyclic_table(unsigned long m);
TablePtr a4_table();
TablePtr a5_table();
TablePtr product_table(const TablePtr &t1, const TablePtr &t2);

/// Standard character inner product of two class functions given by
/// coefficient vectors over Irr(T) (second argument conjugated).
CycNum inner_product(const CharTable &t, const std::vector<CycNum> &phi,
                     const std::vector<CycNum> &psi);

/// Values of the class function sum_a coeffs[a] * chi_a.
std::vector<CycNum> class_function_values(const CharTable &t,
                                          const std::vector<CycNum> &coeffs);

enum class ModelFamily { Trivial, A4, A5 };

/// C_{2^n} x H for n >= 0 (the H table itself when n = 0, the cyclic table
/// when H is trivial).
TablePtr model_table(int n, ModelFamily h);

/// N inside G of index p.
struct Embedding {
  TablePtr sub, sup;
  std::vector<int> class_map; // sub class index -> sup class index
  int index = 1;

  void validate() const;
};

/// The square subgroup embedding C_{2^{n-1}} x H <= C_{2^n} x H.
Embedding index2_embedding(int n, ModelFamily h);

/// Coefficients over Irr(sub) of the restriction of character chi of sup.
/// Throws std::logic_error if a coefficient fails to be a non-negative
/// integer.
std::vector<mpz_class> restrict_character(const Embedding &e, int chi);

} // namespace perfiso
