#pragma once

#include <cstddef>

#include "dynaedit/tensorcore/latent_field.hpp"

namespace dynaedit {

double dot(const LatentField& a, const LatentField& b);
double squared_norm(const LatentField& a) noexcept;
double norm(const LatentField& a) noexcept;

// <a,b> / (|a| |b|). Throws Error{degenerate_input} when both norms are below
// 1e-12; returns 0 when exactly one of them is.
double cosine_sim(const LatentField& a, const LatentField& b);

// -(1/(T*d)) * |a - b|^2
double neg_mse(const LatentField& a, const LatentField& b);

// alpha * x + y
LatentField axpy(double alpha, const LatentField& x, const LatentField& y);

LatentField add(const LatentField& a, const LatentField& b);
LatentField subtract(const LatentField& a, const LatentField& b);
LatentField scale(double alpha, const LatentField& x);

// alpha * x + beta * y
LatentField linear_combination(double alpha, const LatentField& x, double beta, const LatentField& y);

// Columns [begin, end) of every frame, as a (frames x (end-begin)) field.
LatentField slice_dims(const LatentField& x, std::size_t begin, std::size_t end);

// Frame 0 as a (1 x frame_dim) field.
LatentField first_frame(const LatentField& x);

}  // namespace dynaedit
