/*!
  \file simulate.hpp
  \brief Bit-parallel simulation of logic networks
*/

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mch/network.hpp"

namespace mch
{

/*! \brief Word-parallel pattern block: `words` 64-bit words per PI. */
struct pattern_block
{
  uint32_t num_pis{ 0 };
  uint32_t words{ 0 };
  /*! \brief Laid out as `values[pi * words + w]`. */
  std::vector<uint64_t> values;

  std::span<const uint64_t> pi( uint32_t i ) const { return { values.data() + i * words, words }; }
  std::span<uint64_t> pi( uint32_t i ) { return { values.data() + i * words, words }; }

  bool bit( uint32_t pi_index, uint64_t pattern ) const
  {
    return ( values[pi_index * words + pattern / 64u] >> ( pattern % 64u ) ) & 1u;
  }
};

/*! \brief Patterns enumerating minterms `[first, first + 64 * words)` of `num_pis` variables. */
pattern_block exhaustive_patterns( uint32_t num_pis, uint64_t first_minterm, uint32_t words );

pattern_block random_patterns( uint32_t num_pis, uint32_t words, std::mt19937_64& rng );

/*! \brief Value words of every node (`result[node * words + w]`). */
std::vector<uint64_t> simulate_nodes( logic_network const& net, pattern_block const& patterns );

/*! \brief Value words of every output (`result[po * words + w]`), complements applied. */
std::vector<uint64_t> simulate_outputs( logic_network const& net, pattern_block const& patterns );

/*! \brief Full truth tables of all outputs for networks with at most 16 PIs. */
std::vector<std::vector<uint64_t>> exhaustive_output_tables( logic_network const& net );

} // namespace mch
