/*!
  \file dsd.hpp
  \brief Disjoint-support decomposition of small truth tables
*/

#pragma once

#include <cstdint>
#include <vector>

#include "mch/truth_table.hpp"

namespace mch
{

struct dsd_tree
{
  enum class op : uint8_t
  {
    const0,
    var,
    and_op,
    xor_op,
    maj,
    prime
  };

  struct child
  {
    uint32_t node;
    bool complemented;
  };

  struct node
  {
    op kind{ op::const0 };
    /*! \brief Variable index for `var` nodes. */
    uint8_t var{ 0 };
    std::vector<child> children;
    /*! \brief Function of a `prime` node over its children (child i is variable i). */
    truth_table function;
  };

  std::vector<node> nodes;
  child root{ 0, false };

  /*! \brief The top node is a prime over plain variables. */
  bool non_decomposable() const;
  truth_table evaluate( uint32_t num_vars ) const;
};

struct dsd_params
{
  /*! \brief Turn three-input primes that are majorities up to negation into `maj` nodes. */
  bool detect_majority{ true };
};

dsd_tree dsd_decompose( truth_table const& tt, dsd_params const& ps = {} );

} // namespace mch
