/*!
  \file io.hpp
  \brief Readers and writers for AIGER, BLIF, structural Verilog and choice networks

  All readers throw `parse_error` with a line number (or byte offset for
  binary AIGER) on malformed input. Readers build networks through
  structural hashing, so trivially redundant gates in a file are merged.
*/

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mch/choices.hpp"
#include "mch/mapper.hpp"
#include "mch/network.hpp"

namespace mch
{

/*! \brief A file feature outside the supported subset (latches, for instance). */
struct unsupported_input : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/*! \brief A file that cannot be opened for reading or writing. */
struct file_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/*! \brief Reads combinational AIGER in ASCII (`aag`) or binary (`aig`) form; symbols and comments are ignored. */
logic_network read_aiger( std::istream& is );
logic_network read_aiger( std::filesystem::path const& path );

enum class aiger_format : uint8_t
{
  ascii,
  binary
};

/*! \brief Writes the live part of `net` as AIGER; XOR and MAJ gates are decomposed into ANDs first. */
void write_aiger( logic_network const& net, std::ostream& os, aiger_format format = aiger_format::binary );
/*! \brief Format chosen by extension: `.aag` is ASCII, anything else binary. */
void write_aiger( logic_network const& net, std::filesystem::path const& path );

/*! \brief One `.names` block per LUT with its ISOP cubes. Throws `unsupported_input` for cell netlists. */
void write_blif( mapped_netlist const& m, std::ostream& os, std::string const& model = "top" );
/*! \brief One `.names` block per live gate. */
void write_blif( logic_network const& net, std::ostream& os, std::string const& model = "top" );

/*! \brief Reads a single combinational BLIF model (`.model`, `.inputs`, `.outputs`, `.names`, `.end`) into an AIG. */
logic_network read_blif( std::istream& is );
logic_network read_blif( std::filesystem::path const& path );

/*! \brief Gate-level Verilog of a cell netlist; cell pins are named A, B, C, ... and the output Y. */
void write_verilog( mapped_netlist const& m, cell_library const& lib, std::ostream& os,
                    std::string const& module = "top" );

/*! \brief Text serialization of a choice network (arena, base size and classes). */
void write_choices( choice_network const& cn, std::ostream& os );
choice_network read_choices( std::istream& is );

cell_library read_cell_library( std::filesystem::path const& path );

/*! \brief Network from `.aag`, `.aig`, `.blif` or `.mch` (the base network's arena with its classes dropped). */
logic_network read_network( std::filesystem::path const& path );
/*! \brief Choice network from `.mch`, or a choice network without classes for the other formats. */
choice_network read_choice_network( std::filesystem::path const& path );
/*! \brief Writes by extension: `.aag`, `.aig`, `.blif` or `.mch`. */
void write_network( logic_network const& net, std::filesystem::path const& path );

} // namespace mch
