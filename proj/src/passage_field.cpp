#include "latgrow/passage_field.hpp"

namespace latgrow {

PassageField PassageField::draw(double rate, const Window& window, RngStream& stream) {
  if (!(rate > 0.0)) throw DomainError("passage rate must be positive");
  const int d = window.dim();
  std::vector<double> values(static_cast<std::size_t>(window.size() * d),
                             std::numeric_limits<double>::infinity());
  for (SiteIndex s = 0; s < window.size(); ++s) {
    for (int a = 0; a < d; ++a) {
      if (window.step(s, 2 * a) != kNoSite) {
        values[static_cast<std::size_t>(s * d + a)] = sample_exponential(rate, stream);
      }
    }
  }
  return PassageField(window, rate, std::move(values));
}

PassageField PassageField::from_values(const Window& window, double rate, std::vector<double> values) {
  if (values.size() != static_cast<std::size_t>(window.size() * window.dim())) {
    throw DomainError("passage field has wrong number of values");
  }
  for (SiteIndex s = 0; s < window.size(); ++s) {
    for (int a = 0; a < window.dim(); ++a) {
      auto& v = values[static_cast<std::size_t>(s * window.dim() + a)];
      if (window.step(s, 2 * a) == kNoSite) {
        v = std::numeric_limits<double>::infinity();
      } else if (!(v > 0.0)) {
        throw DomainError("passage times must be positive");
      }
    }
  }
  return PassageField(window, rate, std::move(values));
}

PassageField PassageField::scaled(double c) const {
  if (!(c > 0.0)) throw DomainError("scale factor must be positive");
  std::vector<double> v = values_;
  for (auto& x : v) x *= c;
  return PassageField(window_, rate_ / c, std::move(v));
}

}  // namespace latgrow
