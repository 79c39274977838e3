#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tetquad/geometry.hpp"

namespace tetquad {

/// Unstructured tetrahedral mesh with per-node vector samples (vorticity).
struct TetMesh {
    std::vector<Vec3> nodes;
    std::vector<std::array<int, 4>> tets;
    std::vector<Vec3> vorticity;  // one sample per node

    Tetrahedron tetrahedron(int t) const {
        const auto& c = tets[static_cast<size_t>(t)];
        return {{nodes[static_cast<size_t>(c[0])], nodes[static_cast<size_t>(c[1])],
                 nodes[static_cast<size_t>(c[2])], nodes[static_cast<size_t>(c[3])]}};
    }
};

namespace detail {

/// Reads whitespace-delimited tokens from a tetgen-style file, tracking
/// line numbers and stripping '#' comments.
class TetgenTokenizer {
public:
    TetgenTokenizer(const std::string& path) : path_(path), in_(path) {
        if (!in_) throw std::runtime_error("cannot open " + path);
    }

    bool next(std::string& tok) {
        for (;;) {
            if (pos_ >= line_.size()) {
                if (!std::getline(in_, line_)) return false;
                ++lineno_;
                const auto hash = line_.find('#');
                if (hash != std::string::npos) line_.erase(hash);
                pos_ = 0;
            }
            while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_])))
                ++pos_;
            if (pos_ >= line_.size()) continue;
            size_t end = pos_;
            while (end < line_.size() && !std::isspace(static_cast<unsigned char>(line_[end])))
                ++end;
            tok = line_.substr(pos_, end - pos_);
            pos_ = end;
            return true;
        }
    }

    long long next_int(const char* what) {
        std::string tok;
        if (!next(tok)) fail(std::string("unexpected end of file, expected ") + what);
        try {
            size_t used = 0;
            const long long v = std::stoll(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (...) {
            fail("bad integer '" + tok + "' for " + what);
        }
    }

    double next_real(const char* what) {
        std::string tok;
        if (!next(tok)) fail(std::string("unexpected end of file, expected ") + what);
        try {
            size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (...) {
            fail("bad number '" + tok + "' for " + what);
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error(path_ + ":" + std::to_string(lineno_) + ": " + msg);
    }

private:
    std::string path_;
    std::ifstream in_;
    std::string line_;
    size_t pos_ = 0;
    long lineno_ = 0;
};

}  // namespace detail

/// Load a mesh from tetgen-convention .node / .ele files.  Node and
/// element ids may be 0- or 1-based; the base is taken from the first id
/// in each file.  Vorticity is zero-initialized; sample it afterwards.
inline TetMesh load_mesh(const std::string& node_path, const std::string& ele_path) {
    TetMesh mesh;
    long long node_base = 0;
    {
        detail::TetgenTokenizer tk(node_path);
        const long long n_nodes = tk.next_int("node count");
        const long long dim = tk.next_int("dimension");
        const long long n_attrs = tk.next_int("attribute count");
        const long long n_markers = tk.next_int("boundary marker count");
        if (n_nodes <= 0) tk.fail("node count must be positive");
        if (dim != 3) tk.fail("expected dimension 3");

        mesh.nodes.resize(static_cast<size_t>(n_nodes));
        for (long long i = 0; i < n_nodes; ++i) {
            const long long id = tk.next_int("node id");
            if (i == 0) {
                if (id != 0 && id != 1) tk.fail("first node id must be 0 or 1");
                node_base = id;
            }
            const long long idx = id - node_base;
            if (idx < 0 || idx >= n_nodes)
                tk.fail("node id " + std::to_string(id) + " out of range");
            Vec3& p = mesh.nodes[static_cast<size_t>(idx)];
            p.x = tk.next_real("x");
            p.y = tk.next_real("y");
            p.z = tk.next_real("z");
            for (long long a = 0; a < n_attrs; ++a) tk.next_real("attribute");
            for (long long b = 0; b < n_markers; ++b) tk.next_int("boundary marker");
        }
        std::string extra;
        if (tk.next(extra)) tk.fail("trailing data after declared node count");
    }
    {
        detail::TetgenTokenizer tk(ele_path);
        const long long n_tets = tk.next_int("element count");
        const long long npt = tk.next_int("nodes per element");
        const long long n_attrs = tk.next_int("attribute count");
        if (n_tets <= 0) tk.fail("element count must be positive");
        if (npt != 4) tk.fail("expected 4 nodes per element");

        const long long n_nodes = static_cast<long long>(mesh.nodes.size());
        long long ele_base = 0;
        mesh.tets.resize(static_cast<size_t>(n_tets));
        for (long long t = 0; t < n_tets; ++t) {
            const long long id = tk.next_int("element id");
            if (t == 0) {
                if (id != 0 && id != 1) tk.fail("first element id must be 0 or 1");
                ele_base = id;
            }
            const long long idx = id - ele_base;
            if (idx < 0 || idx >= n_tets)
                tk.fail("element id " + std::to_string(id) + " out of range");
            for (int c = 0; c < 4; ++c) {
                // Node references share the .node file's id base.
                const long long ref = tk.next_int("node reference") - node_base;
                if (ref < 0 || ref >= n_nodes)
                    tk.fail("element " + std::to_string(id) + " references node out of range");
                mesh.tets[static_cast<size_t>(idx)][static_cast<size_t>(c)] =
                    static_cast<int>(ref);
            }
            for (long long a = 0; a < n_attrs; ++a) tk.next_real("attribute");
            const Tetrahedron tet = mesh.tetrahedron(static_cast<int>(idx));
            const double e = tet.max_edge();
            if (tet.volume() < 1e-14 * e * e * e)
                tk.fail("element " + std::to_string(id) + " is degenerate");
        }
        std::string extra;
        if (tk.next(extra)) tk.fail("trailing data after declared element count");
    }
    mesh.vorticity.assign(mesh.nodes.size(), Vec3{});
    return mesh;
}

/// Sample a vector field at every node.
template <typename F>
void sample_vorticity(TetMesh& mesh, F&& field) {
    mesh.vorticity.resize(mesh.nodes.size());
    for (size_t i = 0; i < mesh.nodes.size(); ++i) mesh.vorticity[i] = field(mesh.nodes[i]);
}

}  // namespace tetquad
