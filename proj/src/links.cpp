#include "proxdeep/links.hpp"

#include <cmath>

namespace proxdeep {

std::string link_name(LinkId id) {
    switch (id) {
        case LinkId::linear: return "linear";
        case LinkId::sigmoid: return "sigmoid";
        case LinkId::tanh: return "tanh";
        case LinkId::rectlu: return "rectlu";
    }
    return "?";
}

LinkId link_from_name(std::string_view name) {
    if (name == "linear") return LinkId::linear;
    if (name == "sigmoid") return LinkId::sigmoid;
    if (name == "tanh") return LinkId::tanh;
    if (name == "rectlu" || name == "relu") return LinkId::rectlu;
    throw ValueError("unknown link function: " + std::string(name));
}

namespace {

// Branch on sign so exp never overflows.
inline double sigmoid(double u) {
    if (u >= 0.0) {
        return 1.0 / (1.0 + std::exp(-u));
    }
    const double e = std::exp(u);
    return e / (1.0 + e);
}

}  // namespace

double link_eval1(LinkId id, double u) {
    switch (id) {
        case LinkId::linear: return u;
        case LinkId::sigmoid: return sigmoid(u);
        case LinkId::tanh: return std::tanh(u);
        case LinkId::rectlu: return u > 0.0 ? u : 0.0;
    }
    return 0.0;
}

double link_jac1(LinkId id, double u) {
    switch (id) {
        case LinkId::linear: return 1.0;
        case LinkId::sigmoid: {
            const double s = sigmoid(u);
            return s * (1.0 - s);
        }
        case LinkId::tanh: {
            const double t = std::tanh(u);
            return 1.0 - t * t;
        }
        case LinkId::rectlu: return u > 0.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

double link_hess1(LinkId id, double u) {
    switch (id) {
        case LinkId::linear: return 0.0;
        case LinkId::sigmoid: {
            const double s = sigmoid(u);
            return s * (1.0 - s) * (1.0 - 2.0 * s);
        }
        case LinkId::tanh: {
            const double t = std::tanh(u);
            return -2.0 * t * (1.0 - t * t);
        }
        case LinkId::rectlu: return 0.0;
    }
    return 0.0;
}

Vec link_eval(LinkId id, const Vec& x) {
    return x.unaryExpr([id](double u) { return link_eval1(id, u); });
}

Vec link_jac_diag(LinkId id, const Vec& x) {
    return x.unaryExpr([id](double u) { return link_jac1(id, u); });
}

Vec link_hess_diag(LinkId id, const Vec& x) {
    return x.unaryExpr([id](double u) { return link_hess1(id, u); });
}

Mat link_eval(LinkId id, const Mat& x) {
    return x.unaryExpr([id](double u) { return link_eval1(id, u); });
}

Mat link_jac_diag(LinkId id, const Mat& x) {
    return x.unaryExpr([id](double u) { return link_jac1(id, u); });
}

}  // namespace proxdeep
