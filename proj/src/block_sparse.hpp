#pragma once

#include "elastidg/mesh.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace elastidg::detail {

/// Sparse matrix whose nonzero pattern is the element-neighbour graph with
/// dense (row_block x col_block) blocks. Blocks are accumulated in place.
class BlockSparseBuilder {
public:
    BlockSparseBuilder(const Mesh& mesh, int row_block, int col_block)
        : mesh_(mesh), row_block_(row_block), col_block_(col_block)
    {
        const auto ne = static_cast<Eigen::Index>(mesh.num_elements());
        matrix_.resize(ne * row_block, ne * col_block);
        Eigen::Index nnz = 0;
        for (int e = 0; e < mesh.num_elements(); ++e) {
            nnz += static_cast<Eigen::Index>(mesh.stencil(e).size()) * row_block * col_block;
        }
        matrix_.reserve(nnz);
        for (int e = 0; e < mesh.num_elements(); ++e) {
            const auto stencil = mesh.stencil(e);
            for (int j = 0; j < col_block; ++j) {
                const Eigen::Index col = static_cast<Eigen::Index>(e) * col_block + j;
                matrix_.startVec(col);
                for (const int r : stencil) {
                    for (int i = 0; i < row_block; ++i) {
                        matrix_.insertBack(static_cast<Eigen::Index>(r) * row_block + i, col) = 0.0;
                    }
                }
            }
        }
        matrix_.finalize();
    }

    void add(int row_element, int col_element, const Eigen::MatrixXd& block)
    {
        const auto stencil = mesh_.stencil(col_element);
        const auto it = std::lower_bound(stencil.begin(), stencil.end(), row_element);
        if (it == stencil.end() || *it != row_element) {
            throw std::logic_error("BlockSparseBuilder: block outside the element stencil");
        }
        const auto pos = static_cast<Eigen::Index>(it - stencil.begin());
        double* values = matrix_.valuePtr();
        const auto* outer = matrix_.outerIndexPtr();
        for (int j = 0; j < col_block_; ++j) {
            const Eigen::Index col = static_cast<Eigen::Index>(col_element) * col_block_ + j;
            double* dst = values + outer[col] + pos * row_block_;
            for (int i = 0; i < row_block_; ++i) {
                dst[i] += block(i, j);
            }
        }
    }

    [[nodiscard]] SpMat finish() { return std::move(matrix_); }

private:
    const Mesh& mesh_;
    int row_block_;
    int col_block_;
    SpMat matrix_;
};

}  // namespace elastidg::detail
