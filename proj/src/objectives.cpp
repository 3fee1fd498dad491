#include "proxdeep/objectives.hpp"

#include <cmath>
#include <string>

namespace proxdeep {

std::string loss_name(LossId id) {
    return id == LossId::squared_error ? "squared_error" : "multinomial";
}

LossId loss_from_name(std::string_view name) {
    if (name == "squared_error" || name == "l2") return LossId::squared_error;
    if (name == "multinomial" || name == "softmax") return LossId::multinomial;
    throw ValueError("unknown loss: " + std::string(name));
}

LabelsOneHot LabelsOneHot::from_mat(Mat m) {
    for (index_t j = 0; j < m.cols(); ++j) {
        index_t ones = 0;
        for (index_t i = 0; i < m.rows(); ++i) {
            const double v = m(i, j);
            if (v == 1.0) {
                ++ones;
            } else if (v != 0.0) {
                throw ValueError("one-hot matrix: entry not in {0,1} at column " +
                                 std::to_string(j));
            }
        }
        if (ones != 1) {
            throw ValueError("one-hot matrix: column " + std::to_string(j) +
                             " sums to " + std::to_string(ones));
        }
    }
    return LabelsOneHot{std::move(m)};
}

LabelsOneHot LabelsOneHot::from_labels(const std::vector<index_t>& labels, index_t k) {
    Mat m = Mat::Zero(k, static_cast<index_t>(labels.size()));
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j] < 0 || labels[j] >= k) {
            throw ValueError("label index " + std::to_string(labels[j]) +
                             " out of range [0," + std::to_string(k) + ")");
        }
        m(labels[j], static_cast<index_t>(j)) = 1.0;
    }
    return LabelsOneHot{std::move(m)};
}

Mat softmax_cols(const Mat& z) {
    Mat p(z.rows(), z.cols());
    for (index_t j = 0; j < z.cols(); ++j) {
        const double mx = z.col(j).maxCoeff();
        Vec e = (z.col(j).array() - mx).exp();
        p.col(j) = e / e.sum();
    }
    return p;
}

namespace {

void check_dims(const LabelsOneHot& y, const Mat& z1, const char* who) {
    if (y.k() != z1.rows() || y.n() != z1.cols()) {
        throw DimError(std::string(who) + ": labels " + std::to_string(y.k()) + "x" +
                       std::to_string(y.n()) + " vs scores " + std::to_string(z1.rows()) +
                       "x" + std::to_string(z1.cols()));
    }
}

}  // namespace

double multinomial_loss(const LabelsOneHot& y, const Mat& z1) {
    check_dims(y, z1, "multinomial_loss");
    double total = 0.0;
    for (index_t j = 0; j < z1.cols(); ++j) {
        const double mx = z1.col(j).maxCoeff();
        const double lse = mx + std::log((z1.col(j).array() - mx).exp().sum());
        total += lse - y.m.col(j).dot(z1.col(j));
    }
    return total;
}

Vec multinomial_grad(const LabelsOneHot& y, const Mat& z1) {
    check_dims(y, z1, "multinomial_grad");
    Mat g = softmax_cols(z1) - y.m;
    return vec_of(g);
}

ProxResult prox_multinomial(const LabelsOneHot& y, const Vec& eta, const Vec& lam,
                            int inner_iters, double tol, const Vec* warm) {
    const index_t dim = y.k() * y.n();
    if (eta.size() != dim || lam.size() != dim) {
        throw DimError("prox_multinomial: eta/lam length " + std::to_string(eta.size()) +
                       "/" + std::to_string(lam.size()) + " vs K*N = " + std::to_string(dim));
    }
    if ((lam.array() <= 0.0).any()) {
        throw ValueError("prox_multinomial: lam must be strictly positive");
    }

    // G(s) = L(y,s) + ½‖s−η‖²_Λ is smooth; the loss gradient is
    // 1/4-Lipschitz per coordinate block, so this fixed step descends.
    const double step = 1.0 / (0.25 + lam.maxCoeff());
    const double resid_scale = 1.0 + (lam.array() * eta.array()).matrix().norm();

    ProxResult out;
    out.s = warm ? *warm : eta;
    if (out.s.size() != dim) {
        throw DimError("prox_multinomial: warm start has wrong length");
    }

    for (int it = 0; it < inner_iters; ++it) {
        Mat s_mat = mat_of(out.s, y.k(), y.n());
        Vec grad = multinomial_grad(y, s_mat) +
                   (lam.array() * (out.s - eta).array()).matrix();
        out.residual = grad.norm();
        out.iters = it;
        if (out.residual <= tol * resid_scale) {
            out.converged = true;
            return out;
        }
        out.s -= step * grad;
    }

    Mat s_mat = mat_of(out.s, y.k(), y.n());
    Vec grad = multinomial_grad(y, s_mat) + (lam.array() * (out.s - eta).array()).matrix();
    out.residual = grad.norm();
    out.iters = inner_iters;
    out.converged = out.residual <= tol * resid_scale;
    return out;
}

double sq_loss(const Vec& y, const Vec& s) {
    if (y.size() != s.size()) {
        throw DimError("sq_loss: length mismatch");
    }
    return (y - s).squaredNorm();
}

Vec sq_prox(const Vec& y, const Vec& eta, const Vec& lam) {
    if (y.size() != eta.size() || y.size() != lam.size()) {
        throw DimError("sq_prox: length mismatch");
    }
    if ((lam.array() <= 0.0).any()) {
        throw ValueError("sq_prox: lam must be strictly positive");
    }
    return ((2.0 * y.array() + lam.array() * eta.array()) / (2.0 + lam.array())).matrix();
}

double loss_value(LossId loss, const Mat& y, const Mat& z1) {
    if (loss == LossId::multinomial) {
        return multinomial_loss(LabelsOneHot::from_mat(y), z1);
    }
    if (y.rows() != z1.rows() || y.cols() != z1.cols()) {
        throw DimError("loss_value: shape mismatch");
    }
    return (y - z1).squaredNorm();
}

}  // namespace proxdeep
