#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cornerhom/chain.hpp"

namespace cornerhom::corners {

using complexes::ChainComplex;
using complexes::ChainMap;
using qlinalg::Scalar;
using qlinalg::SparseMat;
using qlinalg::SVec;

struct Face {
    int id = 0;
    int codim = 0;
    bool orientable = true;
    /// Cohomology dimensions of the closed face, when the manifest supplies
    /// them directly instead of (or in addition to) cell data.
    std::optional<std::vector<int>> betti;
};

/// One cell structure for the whole manifold, each cell tagged with the face
/// whose interior carries it.  The closed face F is then the subcomplex of
/// cells carried at or below F, so face inclusions never need extra data.
struct CellData {
    std::vector<int> dim;
    std::vector<int> carrier;
    std::vector<SVec> boundary; // signed incidence, global cell ids
};

class CornerManifold {
  public:
    int n = 0;
    std::vector<Face> faces;
    std::vector<std::pair<int, int>> covers; // (smaller, larger), codim drops 1
    bool embedded_faces = true;
    std::optional<CellData> cells;

    /// Checks the lattice axioms, the cell tagging, and any declared betti
    /// vectors; throws input_error naming the offending face or cell.
    void validate() const;

    bool below(int f, int g) const; // closed-face containment, reflexive
    std::vector<int> hyperfaces_above(int f) const;
    int interior_face() const; // the unique codim-0 face

    /// Cells carried at or below the face, as positions into the global ids.
    std::vector<int> face_cells(int f) const;
    ChainComplex face_complex(int f) const;
    std::vector<int> face_betti(int f) const; // declared or derived

  private:
    void ensure_order() const;
    mutable std::vector<std::vector<bool>> leq_; // computed on first use
};

/// Closed union of faces; validity = downward closure in the lattice.
struct FaceSubset {
    std::vector<int> ids;
    void validate(const CornerManifold& m) const;
    bool contains(int f) const;
};

/// Face-decomposition route: degree k collects H^{k-j} of every codim-j face.
std::vector<int> laurent_cohomology_formula(const CornerManifold& m);

struct GluedCell {
    int face = 0; // which face's torus block the cell lives in
    int cell = 0; // global cell id within that face's subcomplex
};

/// Cellular model of the glued space: every face contributes its own cells
/// shifted up by its codimension, and the boundary never leaves the block
/// because the circle 1-cells are cycles.
struct GluedSpace {
    std::vector<std::vector<GluedCell>> cells; // per degree 0..n
    ChainComplex chain;
    ChainMap projection; // chain-level p: kills every positive-codim block
};

GluedSpace build_L(const CornerManifold& m);

/// Cohomology of the glued space, relative to the preimage of X when given.
std::vector<int> cellular_cohomology(const CornerManifold& m, const GluedSpace& g,
                                     const FaceSubset* rel = nullptr);

std::vector<int> minimal_faces(const CornerManifold& m);

} // namespace cornerhom::corners
