// basis.hpp - Excitation-number subspaces and projected operator blocks

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "cqed/params.hpp"

namespace cqed {

struct BasisState {
    int photons{0};
    std::vector<int> excited; // sorted emitter indices, 0-based

    bool operator==(const BasisState&) const = default;
};

// States with a fixed total excitation number, ordered by descending photon
// number and then lexicographically by the excited set.
struct ExcitationBasis {
    int level{0};
    std::size_t emitters{0};
    std::vector<BasisState> states;

    std::size_t dim() const noexcept { return states.size(); }
};

std::size_t basis_dim(int level, std::size_t n_emitters);
ExcitationBasis build_basis(int level, std::size_t n_emitters);

// Position of the doubly excited state (0, {i, j}) inside the level-2 basis.
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n_emitters);

// H_eff projected on the one- and two-excitation subspaces, together with the
// cavity annihilation operator between neighbouring levels:
// a01 = <level 0| a |level 1>, a12 = <level 1| a |level 2>.
struct OperatorBlocks {
    Eigen::MatrixXcd h1;
    Eigen::MatrixXcd h2;
    Eigen::MatrixXd a01;
    Eigen::MatrixXd a12;
};

// max_level = 1 leaves h2 and a12 empty.
OperatorBlocks project_operators(const SystemParams& params, int max_level = 2);

} // namespace cqed
