#pragma once

#include "iwasawa/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <vector>

namespace iwasawa {

/// Eigenvalue with multiplicity after clustering.
struct EigenCluster {
    double value = 0.0;
    int mult = 0;
};

/// Clusters a sorted spectrum: values within rel_tol * max(1, |value|) of the
/// running cluster mean are merged.
inline std::vector<EigenCluster> cluster_eigenvalues(Vec vals, double rel_tol = 1e-8) {
    std::sort(vals.begin(), vals.end());
    std::vector<EigenCluster> out;
    for (int i = 0; i < vals.size(); ++i) {
        if (!out.empty()) {
            EigenCluster& c = out.back();
            if (std::abs(vals[i] - c.value) <= rel_tol * std::max(1.0, std::abs(c.value))) {
                c.value = (c.value * c.mult + vals[i]) / (c.mult + 1);
                ++c.mult;
                continue;
            }
        }
        out.push_back({vals[i], 1});
    }
    return out;
}

/// Operator expressed in an explicit orthonormal basis; keeps the raw matrix
/// plus its asymmetry so callers can assert self-adjointness honestly.
struct SymmetricOperator {
    Mat matrix;            // raw, possibly slightly asymmetric
    Mat basis;             // 2n x d, columns the orthonormal basis used
    double symmetry_residual = 0.0;

    static SymmetricOperator from_matrix(Mat m, Mat basis_cols) {
        SymmetricOperator s;
        s.symmetry_residual = (m - m.transpose()).cwiseAbs().maxCoeff();
        s.matrix = std::move(m);
        s.basis = std::move(basis_cols);
        return s;
    }

    Vec eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (matrix + matrix.transpose()));
        return es.eigenvalues();
    }

    /// Eigenvectors matching eigenvalues(), columns in the operator's basis coordinates.
    Mat eigenvectors() const {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (matrix + matrix.transpose()));
        return es.eigenvectors();
    }

    std::vector<EigenCluster> clusters(double rel_tol = 1e-8) const {
        return cluster_eigenvalues(eigenvalues(), rel_tol);
    }

    double trace() const { return matrix.trace(); }
};

} // namespace iwasawa
