#pragma once

#include <memory>
#include <vector>

#include "perfiso/chartab.hpp"
#include "perfiso/intmat.hpp"

#include <nlohmann/json_fwd.hpp>

namespace perfiso {

/// A 2-block of a table: the characters it contains, its defect and the
/// lattice of generalized characters vanishing on 2-singular classes.
struct Block {
  TablePtr table;
  std::vector<int> char_indices; // ascending
  long defect = 0;
  IntMat prj_basis; // rows: Z-basis of Zprj(B) in coordinates of Irr(B), HNF

  int k() const { return int(char_indices.size()); }
  long l() const { return prj_basis.rows(); }

  nlohmann::json to_json() const;
};

using BlockPtr = std::shared_ptr<const Block>;

/// Central-character linkage at the chosen prime: chi ~ psi iff
/// omega_chi(C) == omega_psi(C) mod P for every class C.
std::vector<BlockPtr> partition_blocks(const TablePtr &t,
                                       const PrimeContext &ctx);

/// Canonical HNF basis of { a : sum a_chi chi vanishes on 2-singular
/// classes }, columns indexed by the block's characters.
IntMat prj_lattice(const Block &b);

struct BlockInvariants {
  long k, l, defect;
};
BlockInvariants block_invariants(const Block &b);

/// The whole table as one block (valid for the model tables whose group
/// algebra is a single block; prerequisites are not re-checked here).
BlockPtr full_table_block(const TablePtr &t);

/// Central character omega_chi(C-hat) = |C| chi(g_C) / chi(1).
CycNum central_character(const CharTable &t, int chi, int cls);

/// The context conductor for tables involving this table's group: the group
/// exponent (halved once when it is twice an odd number).
unsigned long context_conductor(const CharTable &t);

} // namespace perfiso
