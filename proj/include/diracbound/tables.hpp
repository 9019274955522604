#pragma once

/// \file tables.hpp
/// Built-in reference fixtures: the six published 16-entry energy tables
/// (potential x symmetry pairs with their parameter sets) and the per-table
/// acceptance gates.  Rows follow the tables' reading order: n-major, then
/// ell = 1..4, each with the kappa < 0 entry before the kappa > 0 entry.

#include <array>
#include <string>

#include "diracbound/common.hpp"
#include "diracbound/potentials.hpp"
#include "diracbound/reduction.hpp"

namespace diracbound::tables {

/// One published table entry.
struct TableRow {
  int l = 0;
  int n = 0;
  int kappa = 0;
  double E = 0.0;  ///< published value, 7 decimals
};

/// Numeric gate applied by the table command (and the acceptance suite).
/// The two anchor rows are the (n=0, kappa=-2) and (n=0, kappa=1) entries.
struct TableGate {
  bool gated = true;      ///< false: report-only, never fails the run
  double anchor_tol = 0;  ///< absolute tolerance on the two anchors
  double bulk_tol = 0;    ///< absolute tolerance counted over all 16 rows
  int bulk_min = 0;       ///< minimum number of rows within bulk_tol
};

/// A complete table fixture: parameters, published values, and gate.
struct TableSpec {
  int id = 0;
  std::string title;
  potentials::PotentialSpec spec;
  reduction::SymmetryCase sym;
  std::array<TableRow, 16> rows;
  TableGate gate;
};

/// Fixture for table 1..6.  Throws UsageError for other ids.
inline const TableSpec& table_fixture(int id) {
  using potentials::Hellmann;
  using potentials::Varshni;
  using potentials::WeiHua;
  using reduction::Symmetry;
  using reduction::SymmetryCase;

  static const std::array<TableSpec, 6> fixtures = {{
      {1,
       "Hellmann potential, spin symmetry (a=0.25, b=0.20, beta=0.02, A1=M=10)",
       Hellmann{0.25, 0.20, 0.02},
       SymmetryCase{Symmetry::spin, 10.0, 10.0},
       {{{1, 0, -2, 9.9995294}, {1, 0, 1, 9.9995575},
         {2, 0, -3, 9.9997604}, {2, 0, 2, 9.9997394},
         {3, 0, -4, 9.9999536}, {3, 0, 3, 9.9999700},
         {4, 0, -5, 10.0002770}, {4, 0, 4, 10.0002900},
         {1, 1, -2, 9.9994575}, {1, 1, 1, 9.9995700},
         {2, 1, -3, 9.9996894}, {2, 1, 2, 9.9997300},
         {3, 1, -4, 9.9999464}, {3, 1, 3, 9.9999700},
         {4, 1, -5, 10.0002740}, {4, 1, 4, 10.0002900}}},
       {true, 5e-8, 1e-6, 16}},
      {2,
       "Hellmann potential, pseudospin symmetry (a=0.25, b=0.20, beta=0.02, A2=M=10)",
       Hellmann{0.25, 0.20, 0.02},
       SymmetryCase{Symmetry::pseudospin, 10.0, 10.0},
       {{{1, 0, -2, 9.9998031}, {1, 0, 1, 9.9997925},
         {2, 0, -3, 9.9997710}, {2, 0, 2, 9.9998598},
         {3, 0, -4, 9.9997412}, {3, 0, 3, 9.9998977},
         {4, 0, -5, 9.9997125}, {4, 0, 4, 9.9992950},
         {1, 1, -2, 9.9993925}, {1, 1, 1, 9.9998281},
         {2, 1, -3, 9.9994514}, {2, 1, 2, 9.9998599},
         {3, 1, -4, 9.9994310}, {3, 1, 3, 9.9999016},
         {4, 1, -5, 9.9993933}, {4, 1, 4, 9.9999477}}},
       {true, 1e-6, 1e-5, 14}},
      {3,
       "Wei Hua potential, spin symmetry (a=0.10, D=0.0001, beta=0.01, A1=2, M=0.001)",
       WeiHua{0.0001, 0.10, 0.01},
       SymmetryCase{Symmetry::spin, 2.0, 0.001},
       {{{1, 0, -2, 1.9986997}, {1, 0, 1, 1.9963313},
         {2, 0, -3, 1.9993378}, {2, 0, 2, 1.9991501},
         {3, 0, -4, 1.9995723}, {3, 0, 3, 1.9996379},
         {4, 0, -5, 1.9996860}, {4, 0, 4, 1.9997974},
         {1, 1, -2, 1.9976352}, {1, 1, 1, 1.9985369},
         {2, 1, -3, 1.9993378}, {2, 1, 2, 1.9996379},
         {3, 1, -4, 1.9994823}, {3, 1, 3, 1.9996379},
         {4, 1, -5, 1.9994378}, {4, 1, 4, 1.9998700}}},
       {false, 0.0, 0.0, 0}},
      {4,
       "Wei Hua potential, pseudospin symmetry (a=0.25, D=0.01, beta=0.10, A2=10, M=1)",
       WeiHua{0.01, 0.25, 0.10},
       SymmetryCase{Symmetry::pseudospin, 10.0, 1.0},
       {{{1, 0, -2, 1.0049979}, {1, 0, 1, 0.9956234},
         {2, 0, -3, 1.0056224}, {2, 0, 2, 1.0024995},
         {3, 0, -4, 1.0057785}, {3, 0, 3, 1.0039570},
         {4, 0, -5, 1.0058222}, {4, 0, 4, 1.0045295},
         {1, 1, -2, 1.0006250}, {1, 1, 1, 1.0000000},
         {2, 1, -3, 0.9974994}, {2, 1, 2, 1.0024763},
         {3, 1, -4, 0.9952527}, {3, 1, 3, 1.0045295},
         {4, 1, -5, 0.9932780}, {4, 1, 4, 1.0064216}}},
       {true, 1e-6, 1e-5, 13}},
      {5,
       "Varshni potential, spin symmetry (a=b=0.15, beta=0.001, A1=M=5)",
       Varshni{0.15, 0.15, 0.001},
       SymmetryCase{Symmetry::spin, 5.0, 5.0},
       {{{1, 0, -2, 4.9999970}, {1, 0, 1, 4.9999814},
         {2, 0, -3, 5.0000009}, {2, 0, 2, 4.9999992},
         {3, 0, -4, 5.0000023}, {3, 0, 3, 5.0000024},
         {4, 0, -5, 5.0000030}, {4, 0, 4, 5.0000034},
         {1, 1, -2, 4.9999884}, {1, 1, 1, 4.9999961},
         {2, 1, -3, 5.0000070}, {2, 1, 2, 5.0000050},
         {3, 1, -4, 5.0000022}, {3, 1, 3, 5.0000024},
         {4, 1, -5, 5.0000023}, {4, 1, 4, 5.0000036}}},
       {true, 1e-6, 1e-5, 13}},
      {6,
       "Varshni potential, pseudospin symmetry (a=b=0.15, beta=0.001, A2=M=5)",
       Varshni{0.15, 0.15, 0.001},
       SymmetryCase{Symmetry::pseudospin, 5.0, 5.0},
       {{{1, 0, -2, 5.0000001}, {1, 0, 1, 4.9999908},
         {2, 0, -3, 5.0000008}, {2, 0, 2, 4.9999984},
         {3, 0, -4, 5.0000009}, {3, 0, 3, 5.0000001},
         {4, 0, -5, 5.0000008}, {4, 0, 4, 5.0000008},
         {1, 1, -2, 4.9999995}, {1, 1, 1, 4.9999979},
         {2, 1, -3, 5.0000007}, {2, 1, 2, 4.9999994},
         {3, 1, -4, 5.0000004}, {3, 1, 3, 5.0000002},
         {4, 1, -5, 5.0000000}, {4, 1, 4, 5.0000008}}},
       {true, 1e-6, 1e-5, 13}},
  }};
  if (id < 1 || id > 6)
    throw UsageError("table id must be between 1 and 6");
  return fixtures[static_cast<std::size_t>(id - 1)];
}

} // namespace diracbound::tables
