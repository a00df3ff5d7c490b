#pragma once

namespace mcf {

/// Real dilogarithm Li2(z) = sum z^n / n^2 for z <= 1. Power series on |z| <= 1/2, the
/// reflection, Landen and inversion identities elsewhere. Throws DomainError for z > 1.
double dilog(double z);

/// Left-hand side of
///   -pi^2/24 + log(3) log(2) / 2 - Li2(2/3) / 2 + 3 Li2(1/3) / 2 - Li2(-1/3) = pi^2/24.
double dilog_identity_lhs();

/// |dilog_identity_lhs() - pi^2/24|.
double dilog_identity_check();

}  // namespace mcf
