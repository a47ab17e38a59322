#pragma once

#include "cornerhom/chain.hpp"

namespace cornerhom::complexes {

/// Mixed complex (C, b, B): b lowers degree, B raises it, and
/// b*b = B*B = b*B + B*b = 0 on every degree where both sides stay in range.
struct MixedComplex {
    std::vector<int> dims;
    std::vector<SparseMat> b;    // b[q]: dims[q-1] x dims[q], q >= 1
    std::vector<SparseMat> Bop;  // Bop[q]: dims[q+1] x dims[q], q <= top-1

    int top() const { return static_cast<int>(dims.size()) - 1; }
    int dim(int q) const { return (q >= 0 && q <= top()) ? dims[q] : 0; }
    SparseMat b_at(int q) const;
    SparseMat B_at(int q) const;

    /// Throws engine_defect when an identity fails.
    void validate() const;

    ChainComplex b_complex() const;
};

/// Total complex T_n = sum over k >= 0 of C_{n-2k} ("column" k), with
/// d = b on each column plus B mapping column k to column k-1 (dropped on
/// column 0). Built through degree up_to; requires up_to <= top of C.
struct CyclicTotal {
    ChainComplex total;
    std::vector<std::vector<int>> offsets; // offsets[n][k] = start of column k

    int columns(int n) const { return static_cast<int>(offsets[n].size()); }
};

CyclicTotal cyclic_total(const MixedComplex& m, int up_to);

/// Dimensions of the cyclic-type homology of the total complex, degrees
/// 0..qmax. Needs the mixed complex through degree qmax+1.
std::vector<int> cyclic_homology_dims(const MixedComplex& m, int qmax);

/// The periodicity sequence: column-0 inclusion and the shift map S give
///   0 -> (C, b) -> T -> T[-2] -> 0,
/// whose long exact homology sequence connects Hochschild-type and
/// cyclic-type groups; the connecting map is induced by B.
struct SbiReport {
    std::vector<int> hh; // degrees 0..qmax
    std::vector<int> hc;
    LongExactSequence les; // A = b-complex, B = total, C = shifted total
    int qmax = -1;
};

SbiReport sbi_report(const MixedComplex& m, int qmax);

} // namespace cornerhom::complexes
