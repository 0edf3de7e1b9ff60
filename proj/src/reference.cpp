#include "msbayes/reference.hpp"

namespace msbayes {
namespace reference {

ParameterSet competing_risks_estimates() {
  return ParameterSet(
      ModelFamily::CompetingRisks,
      {TransitionParams(TransitionLabel::FR, WeibullShapeScale(0.9197, 0.0279),
                        RegressionCoefficients(0.0254, 0.0244)),
       TransitionParams(TransitionLabel::FD, WeibullShapeScale(0.7759, 0.3310),
                        RegressionCoefficients(-0.5088, 0.0705))});
}

ParameterSet illness_death_estimates() {
  return ParameterSet(
      ModelFamily::IllnessDeath,
      {TransitionParams(TransitionLabel::FR, WeibullShapeScale(0.9198, 0.0279),
                        RegressionCoefficients(0.0262, 0.0244)),
       TransitionParams(TransitionLabel::FD, WeibullShapeScale(0.7759, 0.3311),
                        RegressionCoefficients(-0.5092, 0.0705)),
       TransitionParams(TransitionLabel::RD, WeibullShapeScale(0.6234, 0.5769),
                        RegressionCoefficients(-0.6127, 0.0498))});
}

ParameterSet estimates(ModelFamily family) {
  return family == ModelFamily::CompetingRisks ? competing_risks_estimates()
                                               : illness_death_estimates();
}

}  // namespace reference
}  // namespace msbayes
