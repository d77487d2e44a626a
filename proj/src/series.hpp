#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "deriv_vector.hpp"
#include "zonal.hpp"

namespace hgm::series {

struct HypParams {
    double a;
    double c;
};

struct TruncationConfig {
    int degree = 0; // maximum retained total degree K
    int m = 0;      // number of variables
};

enum class InitMode { full_series, linear };

// Monomial-basis coefficients of the hypergeometric series, cached per
// (max degree, max length).  The change-of-basis matrices are built in exact
// rational arithmetic per weight and stored as doubles c_{kappa,lambda}/k!.
class SeriesContext {
public:
    static std::shared_ptr<const SeriesContext> get(int degree, int max_length);

    const PartitionTable& table() const { return *table_; }
    int degree() const { return table_->max_weight; }

    // q_lambda(a,c) for every partition in the table.  Throws InvalidArgument
    // naming the offending partition when some (c)_kappa vanishes.
    std::vector<double> q_values(const HypParams& p) const;

    struct Entry {
        int col;    // global partition index of lambda
        double cdk; // c_{kappa,lambda} / k!
    };
    const std::vector<std::vector<Entry>>& rows() const { return rows_; }

private:
    std::shared_ptr<const PartitionTable> table_;
    std::vector<std::vector<Entry>> rows_; // one per partition (row = kappa)
};

// Monomial symmetric polynomial M_lambda at y; 0 when length(lambda) > #y.
double monomial_symmetric(const Partition& lambda, std::span<const double> y);

double q_coefficient(const Partition& lambda, const HypParams& p);
Rational q_coefficient_exact(const Partition& lambda, const Rational& a, const Rational& c);

// Closed-form sums over all partitions of k for the two column shapes used
// by the linear initial approximation.
double q_ones_closed_form(int k, const HypParams& p);      // lambda = (1^k), k >= 1
double q_two_ones_closed_form(int k, const HypParams& p);  // lambda = (2,1^{k-2}), k >= 2

// Truncated series value sum_{|lambda| <= K} q_lambda M_lambda(y).
double hyp1f1_series(const HypParams& p, std::span<const double> y, const TruncationConfig& cfg);

// Degree at which the remaining total-degree blocks contribute less than tol
// relatively at y0, estimated from the ratio of consecutive block bounds.
// Capped per dimension (table cost grows combinatorially); *capped reports it.
int auto_truncation_degree(const HypParams& p, std::span<const double> y0, int m,
                           double tol = 1e-13, bool* capped = nullptr);

// d^tau F for a rectangular tau = (t^l) applied to coordinates 1..l.
double rect_derivative_series(int t, int l, const HypParams& p, std::span<const double> y,
                              const TruncationConfig& cfg);

// All 2^m square-free derivative values at a point near the origin.
// full_series differentiates the truncated expansion exactly; linear keeps
// first-order terms only (and is the one mode defined at tied coordinates).
DerivVector squarefree_derivatives_at(const HypParams& p, std::span<const double> y0,
                                      const TruncationConfig& cfg,
                                      InitMode mode = InitMode::full_series);

// Power-series coefficients of the one-variable restriction f(y) = F(y,...,y).
std::vector<double> diagonal_series_coeffs(const HypParams& p, int m, int degree);
// f, f', ..., f^{(nderiv)} at y0 from those coefficients.
std::vector<double> diagonal_series_state(const HypParams& p, int m, double y0, int degree,
                                          int nderiv);

void dump_zonal_tsv(int degree, int max_length, std::ostream& os);
void dump_q_tsv(const Rational& a, const Rational& c, int degree, int max_length,
                std::ostream& os);

} // namespace hgm::series
