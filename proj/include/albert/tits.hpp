#pragma once

// First and second Tits constructions as cubic norm structures, and the
// identification of a second construction over K = k x k with a first one.

#include <albert/cubic_norm.hpp>

#include <array>
#include <optional>

namespace albert {

// J(D, lambda) on D + D + D with coordinates (x, y, z):
//   N = N_D(x) + lambda N_D(y) + lambda^{-1} N_D(z) - T_D(xyz)
//   # = (x^# - yz, lambda^{-1} z^# - xy, lambda y^# - zx)
class FirstTits final : public CubicJordan {
 public:
  // `division` is a user assertion recorded as metadata; it is never checked.
  FirstTits(AlgebraPtr d, Scalar lambda, std::optional<bool> division = std::nullopt);

  std::size_t dim() const override { return 3 * d_->dim(); }
  const RingPtr& base_ring() const override { return d_->base(); }
  Vec unit() const override;
  Scalar norm(const Vec& v) const override;
  Vec sharp(const Vec& v) const override;
  std::string describe() const override;

  const AlgebraPtr& algebra() const { return d_; }
  const Scalar& lambda() const { return lambda_; }
  const std::optional<bool>& division_asserted() const { return division_; }
  static constexpr const char* kDivisionCriterion = "division iff lambda is not a reduced norm of D";

  Vec pack(const Deg3Element& x, const Deg3Element& y, const Deg3Element& z) const;
  std::array<Deg3Element, 3> unpack(const Vec& v) const;

 private:
  AlgebraPtr d_;
  Scalar lambda_;
  Scalar lambda_inv_;
  std::optional<bool> division_;
};

// J(B, sigma, u, mu) on (B, sigma)_+ + B over k, the fixed field of sigma on
// the center K of B:
//   N((b, x)) = N_B(b) + T_K(mu N_B(x)) - T_B(b x u sigma(x))
//   (b, x)^# = (b^# - x u sigma(x), conj(mu) sigma(x)^# u^{-1} - b x)
// Coordinates: the hermitian part in the basis hermitian_basis(), followed
// by the k-coordinates of B (see flatten()).
class SecondTits final : public CubicJordan {
 public:
  // Requires sigma(u) = u, u invertible and N_B(u) = mu conj(mu).
  SecondTits(InvolutionPtr sigma, Deg3Element u, Scalar mu);

  std::size_t dim() const override { return herm_.size() + flat_; }
  const RingPtr& base_ring() const override { return k_; }
  Vec unit() const override;
  Scalar norm(const Vec& v) const override;
  Vec sharp(const Vec& v) const override;
  std::string describe() const override;

  const AlgebraPtr& algebra() const { return sigma_->algebra(); }
  const InvolutionPtr& sigma() const { return sigma_; }
  const Deg3Element& u() const { return u_; }
  const Scalar& mu() const { return mu_; }
  const RingPtr& center() const { return center_; }
  // Flattened k-coordinates of a k-basis of the sigma-hermitian elements.
  const std::vector<Vec>& hermitian_basis() const { return herm_; }

  Vec pack(const Deg3Element& b, const Deg3Element& x) const;
  std::pair<Deg3Element, Deg3Element> unpack(const Vec& v) const;
  // Coordinates of a hermitian element in hermitian_basis().
  Vec hermitian_coords(const Deg3Element& b) const;

 private:
  Scalar to_base(const Scalar& kappa, const char* what) const;

  InvolutionPtr sigma_;
  Deg3Element u_;
  Deg3Element u_inv_;
  Scalar mu_;
  Scalar mu_bar_;
  RingPtr k_;
  RingPtr center_;
  std::size_t flat_ = 0;
  std::vector<Vec> herm_;
  Matrix herm_left_inverse_;
};

using FirstTitsPtr = std::shared_ptr<const FirstTits>;
using SecondTitsPtr = std::shared_ptr<const SecondTits>;

// Checks sigma(u) = u, invertibility and N_B(u) = mu conj(mu); throws
// InadmissiblePair naming the violated condition.
void check_admissible(const InvolutionPtr& sigma, const Deg3Element& u, const Scalar& mu);

// The isomorphism J(D x D^op, switch, 1, mu) -> J(D, lambda) for
// mu = (lambda, lambda^{-1}) in k x k, sending ((d, d), (x1, x2)) to
// (d, x1, x2). Norm preservation is verified in generic coordinates.
struct SplitIdentification {
  SecondTitsPtr source;
  FirstTitsPtr target;
  Matrix forward;   // source coordinates -> target coordinates
  Matrix backward;  // inverse of `forward`
  bool norm_preserved = false;
  bool unit_preserved = false;
};
SplitIdentification split_identify(const AlgebraPtr& d, const Scalar& mu);

// x -> (x, 0, 0), resp. b -> (b, 0) on hermitian coordinates; the columns are
// the images of the standard basis.
Matrix embed_first_summand(const FirstTits& j);
Matrix embed_first_summand(const SecondTits& j);

}  // namespace albert
