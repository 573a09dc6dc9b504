#ifndef GIBBSDP_PRIOR_HPP
#define GIBBSDP_PRIOR_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace gibbsdp {

enum class PriorKind { pd, gg, generic };

// Prior over species proportions within the Gibbs-type family, identified by
// the stability parameter sigma plus one family-specific parameter:
//   pd      two-parameter Poisson-Dirichlet (sigma, theta), theta > -sigma
//   gg      normalized generalized gamma (sigma, tau), tau > 0
//   generic user-supplied mixing density h over the tilted-stable scale,
//           provided as t -> log h(t)
class PriorSpec {
 public:
  static PriorSpec pd(double sigma, double theta) {
    check_sigma(sigma);
    if (!(theta > -sigma))
      throw std::domain_error("PriorSpec::pd: requires theta > -sigma, got theta = " +
                              std::to_string(theta));
    PriorSpec p;
    p.kind_ = PriorKind::pd;
    p.sigma_ = sigma;
    p.param_ = theta;
    return p;
  }

  static PriorSpec gg(double sigma, double tau) {
    check_sigma(sigma);
    if (!(tau > 0.0))
      throw std::domain_error("PriorSpec::gg: requires tau > 0, got " + std::to_string(tau));
    PriorSpec p;
    p.kind_ = PriorKind::gg;
    p.sigma_ = sigma;
    p.param_ = tau;
    return p;
  }

  static PriorSpec generic(double sigma, std::function<double(double)> log_h) {
    check_sigma(sigma);
    if (!log_h) throw std::domain_error("PriorSpec::generic: log_h must be callable");
    PriorSpec p;
    p.kind_ = PriorKind::generic;
    p.sigma_ = sigma;
    p.log_h_ = std::move(log_h);
    return p;
  }

  PriorKind kind() const { return kind_; }
  double sigma() const { return sigma_; }

  double theta() const {
    require(PriorKind::pd, "theta");
    return param_;
  }
  double tau() const {
    require(PriorKind::gg, "tau");
    return param_;
  }
  const std::function<double(double)>& log_h() const {
    require(PriorKind::generic, "log_h");
    return log_h_;
  }

 private:
  PriorSpec() = default;

  static void check_sigma(double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0))
      throw std::domain_error("PriorSpec: requires sigma in (0,1), got " + std::to_string(sigma));
  }
  void require(PriorKind k, const char* field) const {
    if (kind_ != k)
      throw std::invalid_argument(std::string("PriorSpec: ") + field +
                                  " is not defined for this prior kind");
  }

  PriorKind kind_ = PriorKind::pd;
  double sigma_ = 0.5;
  double param_ = 1.0;
  std::function<double(double)> log_h_;
};

}  // namespace gibbsdp

#endif
