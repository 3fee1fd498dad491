#pragma once

#include <string>
#include <string_view>

#include "proxdeep/tensor.hpp"

namespace proxdeep {

// Elementwise activation functions. The sigmoid is the standard increasing
// logistic 1/(1+e^{-u}); rectlu takes derivative 0 at the origin.
enum class LinkId { linear, sigmoid, tanh, rectlu };

std::string link_name(LinkId id);
LinkId link_from_name(std::string_view name);

double link_eval1(LinkId id, double u);
double link_jac1(LinkId id, double u);
double link_hess1(LinkId id, double u);

Vec link_eval(LinkId id, const Vec& x);
Vec link_jac_diag(LinkId id, const Vec& x);
Vec link_hess_diag(LinkId id, const Vec& x);

Mat link_eval(LinkId id, const Mat& x);
Mat link_jac_diag(LinkId id, const Mat& x);

}  // namespace proxdeep
