#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "levy/catalog.hpp"
#include "levy/levy.hpp"

namespace levy {

struct HiggsParams {
  Real m = 0.0;
  Real l = 0.0;

  HiggsParams() = default;
  HiggsParams(Real mass, Real coupling);
};

/// Named residual components at one location (a point or a curve).
struct SectorResidual {
  std::string location;
  std::vector<std::pair<std::string, Matrix>> components;

  /// Throws NumericalError for non-finite entries.
  void add(std::string name, Matrix value);
  const Matrix& at(const std::string& name) const;
  /// Max-norm of one component.
  Real norm(const std::string& name) const { return levy::max_norm(at(name)); }
  /// Largest max-norm over all components.
  Real max_norm() const;
};

/// {"location", "components": [{"name", "norm", "re", "im"}]}; re/im are row-major.
nlohmann::json to_json(const SectorResidual& r);

/// int_0^1 U_{0,t} j_nu(sigma(t)) sigma'^nu(t) U_{t,0} dt for a pointwise current j.
/// With j = g^{mu mu} nabla_mu F_{mu .} this is -U_{0,1} times the Levy operator on U_{1,0}.
Matrix transported_current(const PathKernels& k, const CurrentFn& j);

/// Phi^{A,phi}(sigma) = U_{0,1} phi(sigma(1)) U_{1,0}.
Matrix higgs_functional(const Connection& a, const MatterField& phi, const Curve& sigma);
Matrix higgs_functional(const TransportTable& tab, const MatterField& phi, const Curve& sigma);

/// higgs_eq1: g^{mu mu} nabla_mu nabla_mu phi - (m^2 - l tr(phi^* phi)) phi
/// higgs_eq2_nu: g^{mu mu} nabla_mu F_{mu nu} - [phi, nabla_nu phi]
SectorResidual ymh_residual_pointwise(const Connection& a, const MatterField& phi, const HiggsParams& p,
                                      const Vector& x, const Metric& g);

struct PathspaceOptions {
  Metric metric = Metric::minkowski(4);
  /// Outer needles of the nested second endpoint derivation.
  EndpointOptions outer{{32, 64, 128, 256, 512}, {1e-3, true}, 1e-5};
  /// Inner needles, no wider than the narrowest outer one.  Curves are resampled to 2 max(k) cells.
  EndpointOptions inner{{512, 1024, 2048, 4096}, {1e-3, true}, 1e-5};
  /// First endpoint derivations.
  EndpointOptions first{{32, 64, 128, 256, 512}, {1e-3, true}, 1e-5};
  /// Evaluate the nested D_mu D_mu term (the expensive part).
  bool field_equation = true;
  FiniteDifference fd{1e-3, true};
};

/// int_0^1 [Phi(sigma^r), D_nu Phi(sigma^r)] sigma'^nu(r) dr from the transport table.
Matrix higgs_current_integral(const PathKernels& k, const Connection& a, const MatterField& phi);

/// higgs_eq1: g^{mu nu} D_mu D_nu Phi - (m^2 - l tr(Phi^* Phi)) Phi   (nested endpoint derivations)
/// higgs_eq2: Box_L U + U int [Phi(sigma^r), D_nu Phi(sigma^r)] sigma'^nu dr
/// Also reports endpoint_closed_form: g^{mu nu} D_mu D_nu Phi - U_{0,1} (g^{mu nu} nabla_mu nabla_nu phi) U_{1,0}.
SectorResidual ymh_residual_pathspace(const Connection& a, const MatterField& phi, const HiggsParams& p,
                                      const Curve& sigma, const PathspaceOptions& opts = {});

/// closedness: d_u B v - d_v B u + [B u, B v]
/// divergence: div_L B + int [Phi(sigma^r), D_nu Phi(sigma^r)] sigma'^nu dr
/// field: g^{mu nu} D_mu D_nu Phi - (m^2 - l tr(Phi^* Phi)) Phi   (when opts.field_equation)
/// compatibility: d_u Phi + [B u, Phi]
SectorResidual ymh_system_B(const Connection& a, const MatterField& phi, const HiggsParams& p, const Curve& sigma,
                            const Variation& u, const Variation& v, const PathspaceOptions& opts = {});

/// Psi^{A,psi}(sigma) = (U_{0,1} (x) I_4) psi(sigma(1)).
Spinor dirac_functional(const Connection& a, const MatterField& psi, const Curve& sigma);

/// dirac: (I (x) gamma^mu)(d_mu + A_mu) psi + i m psi
/// source_nu: eta^{mu mu} nabla_mu F_{mu nu} + pr_{su(N)}(i psibar gamma_nu psi)
SectorResidual qcd_residual_pointwise(const Connection& a, const MatterField& psi, Real mass, const Vector& x);

/// pr_{su(N)}(i int_0^1 Psibar(sigma^r) gamma_nu Psi(sigma^r) sigma'^nu(r) dr).
Matrix dirac_current_integral(const PathKernels& k, const MatterField& psi);

/// dirac: (I (x) gamma^mu) D_mu Psi + i m Psi
/// box: Box_L U - U pr(i int Psibar gamma_nu Psi sigma'^nu dr)
/// divergence: div_L B - pr(i int Psibar gamma_nu Psi sigma'^nu dr)
/// consistency: U_{0,1} box - divergence
/// compatibility: d_u Psi + (B u) Psi   (u in E_0)
SectorResidual qcd_residual_pathspace(const Connection& a, const MatterField& psi, Real mass, const Curve& sigma,
                                      const Variation& u, const PathspaceOptions& opts = {});

}  // namespace levy
