#ifndef EEGSEIZ_SPECIAL_HPP
#define EEGSEIZ_SPECIAL_HPP

namespace eegseiz {

// psi(x) for x > 0, recurrence into the asymptotic range.
double digamma(double x);

// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double betainc_reg(double a, double b, double x);

// Two-sided tail probability of Student's t with df degrees of freedom.
double student_t_two_sided(double t, double df);

}  // namespace eegseiz

#endif
