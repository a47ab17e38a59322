#include "cornerhom/corners.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "cornerhom/errors.hpp"

namespace cornerhom::corners {

namespace {

std::string face_tag(int id) { return "face " + std::to_string(id); }

} // namespace

void CornerManifold::ensure_order() const {
    if (!leq_.empty()) return;
    const int nf = static_cast<int>(faces.size());
    leq_.assign(nf, std::vector<bool>(nf, false));
    for (int i = 0; i < nf; ++i) leq_[i][i] = true;
    for (const auto& [s, l] : covers) leq_[s][l] = true;
    // closure; the lattice is tiny, cubic time is fine
    for (int k = 0; k < nf; ++k)
        for (int i = 0; i < nf; ++i)
            if (leq_[i][k])
                for (int j = 0; j < nf; ++j)
                    if (leq_[k][j]) leq_[i][j] = true;
}

bool CornerManifold::below(int f, int g) const {
    ensure_order();
    return leq_[f][g];
}

std::vector<int> CornerManifold::hyperfaces_above(int f) const {
    std::vector<int> out;
    for (const auto& h : faces)
        if (h.codim == 1 && below(f, h.id)) out.push_back(h.id);
    return out;
}

int CornerManifold::interior_face() const {
    for (const auto& f : faces)
        if (f.codim == 0) return f.id;
    throw input_error("no codimension-zero face");
}

void CornerManifold::validate() const {
    require_input(n >= 0, "negative dimension");
    require_input(!faces.empty(), "a manifold needs at least one face");
    int top_count = 0;
    for (int i = 0; i < static_cast<int>(faces.size()); ++i) {
        const Face& f = faces[i];
        require_input(f.id == i, face_tag(f.id) + ": ids must match positions");
        require_input(f.codim >= 0 && f.codim <= n,
                      face_tag(f.id) + ": codimension out of range");
        if (f.codim == 0) ++top_count;
    }
    require_input(top_count == 1, "exactly one codimension-zero face required");
    for (const auto& [s, l] : covers) {
        require_input(s >= 0 && s < static_cast<int>(faces.size()) && l >= 0 &&
                          l < static_cast<int>(faces.size()),
                      "cover relation names a missing face");
        require_input(faces[s].codim == faces[l].codim + 1,
                      face_tag(s) + ": cover must drop codimension by one");
    }
    for (const auto& f : faces) {
        int k = static_cast<int>(hyperfaces_above(f.id).size());
        require_input(k == f.codim,
                      face_tag(f.id) + ": lies under " + std::to_string(k) +
                          " hyperfaces, codimension says " +
                          std::to_string(f.codim));
    }
    if (cells) {
        const CellData& cd = *cells;
        const int nc = static_cast<int>(cd.dim.size());
        require_input(static_cast<int>(cd.carrier.size()) == nc &&
                          static_cast<int>(cd.boundary.size()) == nc,
                      "cell arrays disagree in length");
        for (int c = 0; c < nc; ++c) {
            std::string tag = "cell " + std::to_string(c);
            require_input(cd.carrier[c] >= 0 &&
                              cd.carrier[c] < static_cast<int>(faces.size()),
                          tag + ": carrier is not a face");
            int fdim = n - faces[cd.carrier[c]].codim;
            require_input(cd.dim[c] >= 0 && cd.dim[c] <= fdim,
                          tag + ": does not fit in its carrier");
            for (const auto& [b, coeff] : cd.boundary[c]) {
                require_input(b >= 0 && b < nc, tag + ": boundary id out of range");
                require_input(cd.dim[b] == cd.dim[c] - 1,
                              tag + ": boundary cell has wrong dimension");
                require_input(below(cd.carrier[b], cd.carrier[c]),
                              tag + ": boundary escapes the carrier face");
                require_input(!coeff.is_zero(), tag + ": zero incidence stored");
            }
        }
        ChainComplex whole = face_complex(interior_face());
        require_input(whole.check_squares_zero(), "cell boundary does not square to zero");
        for (const auto& f : faces)
            if (f.betti) {
                std::vector<int> derived = face_complex(f.id).betti_all();
                derived.resize(std::max(derived.size(), f.betti->size()), 0);
                std::vector<int> declared = *f.betti;
                declared.resize(derived.size(), 0);
                require_input(derived == declared,
                              face_tag(f.id) + ": declared cohomology disagrees "
                                               "with its cells");
            }
    }
}

std::vector<int> CornerManifold::face_cells(int f) const {
    std::vector<int> out;
    if (!cells) return out;
    for (int c = 0; c < static_cast<int>(cells->dim.size()); ++c)
        if (below(cells->carrier[c], f)) out.push_back(c);
    return out;
}

ChainComplex CornerManifold::face_complex(int f) const {
    require_input(cells.has_value(), face_tag(f) + ": no cell structure");
    const CellData& cd = *cells;
    const int fdim = n - faces[f].codim;
    std::vector<std::vector<int>> by_dim(fdim + 1);
    std::map<int, std::pair<int, int>> where; // global id -> (degree, position)
    for (int c : face_cells(f)) {
        where[c] = {cd.dim[c], static_cast<int>(by_dim[cd.dim[c]].size())};
        by_dim[cd.dim[c]].push_back(c);
    }
    std::vector<int> dims(fdim + 1);
    std::vector<SparseMat> diffs(fdim + 1);
    for (int q = 0; q <= fdim; ++q) dims[q] = static_cast<int>(by_dim[q].size());
    for (int q = 0; q <= fdim; ++q) {
        SparseMat d(q > 0 ? dims[q - 1] : 0, dims[q]);
        if (q > 0)
            for (int j = 0; j < dims[q]; ++j)
                for (const auto& [b, coeff] : cd.boundary[by_dim[q][j]])
                    d.set(where.at(b).second, j, coeff);
        diffs[q] = std::move(d);
    }
    return ChainComplex(std::move(dims), std::move(diffs));
}

std::vector<int> CornerManifold::face_betti(int f) const {
    if (faces[f].betti) return *faces[f].betti;
    require_input(cells.has_value(),
                  face_tag(f) + ": neither cohomology nor cells given");
    return face_complex(f).betti_all();
}

void FaceSubset::validate(const CornerManifold& m) const {
    for (int f : ids)
        require_input(f >= 0 && f < static_cast<int>(m.faces.size()),
                      "subset names a missing face");
    for (int f : ids)
        for (const auto& g : m.faces)
            if (m.below(g.id, f) && !contains(g.id))
                throw input_error(face_tag(g.id) +
                                  ": subset is not closed under taking faces");
}

bool FaceSubset::contains(int f) const {
    return std::find(ids.begin(), ids.end(), f) != ids.end();
}

std::vector<int> laurent_cohomology_formula(const CornerManifold& m) {
    require_input(m.embedded_faces,
                  "the face decomposition needs embedded hyperfaces");
    std::vector<int> out(m.n + 1, 0);
    for (const auto& f : m.faces) {
        std::vector<int> bv = m.face_betti(f.id);
        for (int i = 0; i < static_cast<int>(bv.size()); ++i) {
            int k = i + f.codim;
            if (k <= m.n) out[k] += bv[i];
        }
    }
    return out;
}

GluedSpace build_L(const CornerManifold& m) {
    require_input(m.cells.has_value(), "glued space needs cell structure");
    const CellData& cd = *m.cells;
    GluedSpace g;
    g.cells.resize(m.n + 1);
    std::map<std::pair<int, int>, std::pair<int, int>> where;
    for (const auto& f : m.faces)
        for (int c : m.face_cells(f.id)) {
            int q = cd.dim[c] + f.codim;
            where[{f.id, c}] = {q, static_cast<int>(g.cells[q].size())};
            g.cells[q].push_back(GluedCell{f.id, c});
        }
    std::vector<int> dims(m.n + 1);
    std::vector<SparseMat> diffs(m.n + 1);
    for (int q = 0; q <= m.n; ++q) dims[q] = static_cast<int>(g.cells[q].size());
    for (int q = 0; q <= m.n; ++q) {
        SparseMat d(q > 0 ? dims[q - 1] : 0, dims[q]);
        if (q > 0)
            for (int j = 0; j < dims[q]; ++j) {
                const GluedCell& gc = g.cells[q][j];
                // the torus factor is a product of cycles, so only the face
                // cell differentiates and the block is preserved
                for (const auto& [b, coeff] : cd.boundary[gc.cell])
                    d.set(where.at({gc.face, b}).second, j, coeff);
            }
        diffs[q] = std::move(d);
    }
    g.chain = ChainComplex(std::move(dims), std::move(diffs));

    int interior = m.interior_face();
    ChainComplex base = m.face_complex(interior);
    std::map<int, int> base_pos;
    {
        std::vector<int> counts(m.n + 1, 0);
        for (int c = 0; c < static_cast<int>(cd.dim.size()); ++c)
            base_pos[c] = counts[cd.dim[c]]++;
    }
    g.projection.f.resize(m.n + 1);
    for (int q = 0; q <= m.n; ++q) {
        SparseMat p(base.dim(q), g.chain.dim(q));
        for (int j = 0; j < g.chain.dim(q); ++j) {
            const GluedCell& gc = g.cells[q][j];
            if (gc.face == interior) p.set(base_pos.at(gc.cell), j, Scalar(1));
        }
        g.projection.f[q] = std::move(p);
    }
    require_engine(g.chain.check_squares_zero(), "glued boundary fails to square to zero");
    require_engine(g.projection.commutes(g.chain, base),
                   "cellular projection is not a chain map");
    return g;
}

std::vector<int> cellular_cohomology(const CornerManifold& m, const GluedSpace& g,
                                     const FaceSubset* rel) {
    ChainComplex use = g.chain;
    if (rel) {
        rel->validate(m);
        // quotient by the preimage subcomplex: keep cells whose carrier face
        // stays outside X
        std::vector<std::vector<int>> keep(m.n + 1);
        std::vector<std::map<int, int>> pos(m.n + 1);
        for (int q = 0; q <= m.n; ++q)
            for (int j = 0; j < g.chain.dim(q); ++j)
                if (!rel->contains(m.cells->carrier[g.cells[q][j].cell])) {
                    pos[q][j] = static_cast<int>(keep[q].size());
                    keep[q].push_back(j);
                }
        std::vector<int> dims(m.n + 1);
        std::vector<SparseMat> diffs(m.n + 1);
        for (int q = 0; q <= m.n; ++q) dims[q] = static_cast<int>(keep[q].size());
        for (int q = 0; q <= m.n; ++q) {
            SparseMat d(q > 0 ? dims[q - 1] : 0, dims[q]);
            if (q > 0) {
                SparseMat full = g.chain.boundary(q);
                for (int j = 0; j < dims[q]; ++j)
                    for (const auto& [r, v] : full.col[keep[q][j]]) {
                        auto it = pos[q - 1].find(r);
                        if (it != pos[q - 1].end()) d.set(it->second, j, v);
                    }
            }
            diffs[q] = std::move(d);
        }
        use = ChainComplex(std::move(dims), std::move(diffs));
    }
    ChainComplex dual = complexes::dualize(use);
    std::vector<int> out(m.n + 1);
    for (int k = 0; k <= m.n; ++k) out[k] = dual.betti(m.n - k);
    return out;
}

std::vector<int> minimal_faces(const CornerManifold& m) {
    std::vector<int> out;
    for (const auto& f : m.faces) {
        bool minimal = true;
        for (const auto& g : m.faces)
            if (g.id != f.id && m.below(g.id, f.id)) minimal = false;
        if (minimal) out.push_back(f.id);
    }
    return out;
}

} // namespace cornerhom::corners
