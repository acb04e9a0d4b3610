#ifndef RIGIDPTS_HEIGHTS_HPP
#define RIGIDPTS_HEIGHTS_HPP

#include <vector>

#include <gmpxx.h>

#include <rigidpts/field.hpp>

namespace rigidpts
{

// Every reduced value of height <= H with non-negative valuation, each once.
// p-adic order: height, then numerator, then denominator.
std::vector<rational> enum_heights(const padic &fl, const mpz_class &H);

// t-adic variant with H = q^h. Order: max-degree, then numerator, then denominator.
std::vector<ratfunc> enum_heights(const tadic &fl, long h);

// All polynomials of degree <= d over F_q, indexed by base-q code.
std::vector<fq_poly> polys_up_to_degree(const finite_field &F, long d);

} // namespace rigidpts

#endif
