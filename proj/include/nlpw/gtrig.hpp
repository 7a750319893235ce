#pragma once

#include "nlpw/quad.hpp"

namespace nlpw::gtrig {

/// Half-period constant pi_{p,q} = 2 * integral_0^1 (1 - t^q)^(-1/p) dt,
/// evaluated through the Beta-function identity (2/q) B(1/p', 1/q) with
/// log-Gamma.  Requires p, q > 1.
double pi_pq(double p, double q);

/// Incomplete integral F_{p,q}(x) = integral_0^x (1 - t^q)^(-1/p) dt for
/// x in [0,1]; the arc-length parameter inverted by sin_pq.  F(1) equals
/// pi_pq / 2; the endpoint singularity is handled by the tanh-sinh rule.
double arcsin_pq(double p, double q, double x);

/// Generalized sine: inverse of arcsin_pq on [0, pi_pq/2], extended to the
/// real line by the reflection sin(pi_pq - t) = sin(t), oddness, and
/// 2 pi_pq periodicity.  Range [-1, 1].
double sin_pq(double p, double q, double t);

/// Generalized cosine, the derivative of sin_pq.  On [0, pi_pq/2] it equals
/// (1 - sin_pq(t)^q)^(1/p).
double cos_pq(double p, double q, double t);

} // namespace nlpw::gtrig
