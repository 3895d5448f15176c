#pragma once

// Transform lists printed for the worked examples, transcribed into the
// expression syntax. Each entry fixes t0 and the leading seeds the formulas
// were printed for; the remaining coefficients are free.

#include <map>
#include <string>
#include <vector>

namespace testing {

struct GoldenTransform {
  const char* label;
  const char* f;
  std::vector<std::string> unknowns;
  double t0;
  // Coefficient symbol -> fixed value; all other Y_j(i) are free.
  std::map<std::string, double> fixed;
  // F(0), F(1), ... as expressions in t0-free coefficient symbols.
  std::vector<const char*> terms;
};

inline const std::vector<GoldenTransform>& golden_transforms() {
  static const std::vector<GoldenTransform> list = {
      {"ln(t + y) at t0 = 1",
       "ln(t + y)",
       {"y"},
       1.0,
       {},
       {"ln(1 + Y(0))", "(1 + Y(1))/(1 + Y(0))",
        "Y(2)/(1 + Y(0)) - (1 + Y(1))^2/(2*(1 + Y(0))^2)",
        "Y(3)/(1 + Y(0)) - Y(2)*(1 + Y(1))/(1 + Y(0))^2 + (1 + Y(1))^3/(3*(1 + Y(0))^3)",
        "Y(4)/(1 + Y(0)) - Y(3)*(1 + Y(1))/(1 + Y(0))^2 + Y(2)*(1 + Y(1))^2/(1 + Y(0))^3"
        " - Y(2)^2/(2*(1 + Y(0))^2) - (1 + Y(1))^4/(4*(1 + Y(0))^4)"}},
      {"sin(t*y) at t0 = 0",
       "sin(t*y)",
       {"y"},
       0.0,
       {},
       {"0", "Y(0)", "Y(1)", "-Y(0)^3/6 + Y(2)", "Y(3) - Y(0)^2*Y(1)/2",
        "Y(0)^5/120 - Y(0)*Y(1)^2/2 - Y(0)^2*Y(2)/2 + Y(4)"}},
      {"sqrt(t + y^2) at t0 = 1, Y(0) = 0",
       "sqrt(t + y^2)",
       {"y"},
       1.0,
       {{"Y(0)", 0.0}},
       {"1", "1/2", "-1/8 + Y(1)^2/2", "1/16 - Y(1)^2/4 + Y(1)*Y(2)",
        "-Y(1)^4/8 + 3*Y(1)^2/16 + (128*Y(3) - 64*Y(2))*Y(1)/128 - 5/128 + Y(2)^2/2",
        "3*Y(1)^4/16 - Y(1)^3*Y(2)/2 - 5*Y(1)^2/32 + (Y(4) - Y(3)/2 + 3*Y(2)/8)*Y(1) + 7/256"
        " - Y(2)^2/4 + Y(2)*Y(3)"}},
      {"nsqrt(t + y^2) at t0 = 1, Y(0) = 0",
       "nsqrt(t + y^2)",
       {"y"},
       1.0,
       {{"Y(0)", 0.0}},
       {"-1", "-1/2", "-(-1/8 + Y(1)^2/2)", "-(1/16 - Y(1)^2/4 + Y(1)*Y(2))",
        "-(-Y(1)^4/8 + 3*Y(1)^2/16 + (128*Y(3) - 64*Y(2))*Y(1)/128 - 5/128 + Y(2)^2/2)",
        "-(3*Y(1)^4/16 - Y(1)^3*Y(2)/2 - 5*Y(1)^2/32 + (Y(4) - Y(3)/2 + 3*Y(2)/8)*Y(1) + 7/256"
        " - Y(2)^2/4 + Y(2)*Y(3))"}},
      {"asin(1 - t + y) at t0 = 0, Y(0) = -1, Y(1) = 2",
       "asin(1 - t + y)",
       {"y"},
       0.0,
       {{"Y(0)", -1.0}, {"Y(1)", 2.0}},
       {"0", "1", "Y(2)", "Y(3) + 1/6", "Y(4) + Y(2)/2",
        "Y(5) + 3/40 + Y(3)/2 + Y(2)^2/2",
        "3*Y(2)/8 + Y(4)/2 + Y(2)*Y(3) + Y(6) + Y(2)^3/6",
        "(56*Y(3) + 84)*Y(2)^2/112 + Y(2)*Y(4) + 3*Y(3)/8 + Y(5)/2 + Y(7) + Y(3)^2/2 + 5/112"}},
      {"sec(t)^2/(1 + y^2) at t0 = 0, Y(0) = 0, Y(1) = 1, Y(2) = 0",
       "sec(t)^2/(1 + y^2)",
       {"y"},
       0.0,
       {{"Y(0)", 0.0}, {"Y(1)", 1.0}, {"Y(2)", 0.0}},
       {"1", "0", "0", "0", "2/3 - 2*Y(3)"}},
      {"ln(y1 - 1/(t + y2)) at t0 = 0, Y1(0) = 2, Y2(0) = 1",
       "ln(y1 - 1/(t + y2))",
       {"y1", "y2"},
       0.0,
       {{"Y1(0)", 2.0}, {"Y2(0)", 1.0}},
       {"0", "Y1(1) + 1 + Y2(1)",
        "Y1(2) - (1 + Y2(1))^2 + Y2(2) - (Y1(1) + 1 + Y2(1))^2/2",
        "Y1(3) + (1 + Y2(1))^3 - 2*(1 + Y2(1))*Y2(2) + Y2(3)"
        " - (Y1(2) - 1 - 2*Y2(1) - Y2(1)^2 + Y2(2))*(Y1(1) + 1 + Y2(1))"
        " + (Y1(1) + 1 + Y2(1))^3/3"}},
      {"4/y1 - ln(t + y2) at t0 = 0, Y1(0) = 2, Y2(0) = 1",
       "4/y1 - ln(t + y2)",
       {"y1", "y2"},
       0.0,
       {{"Y1(0)", 2.0}, {"Y2(0)", 1.0}},
       {"2", "-Y1(1) - Y2(1) - 1",
        "Y1(1)^2/2 - Y1(2) - Y2(2) + (1 + Y2(1))^2/2",
        "-Y1(1)^3/4 + Y1(2)*Y1(1) - Y1(3) - Y2(3) + (1 + Y2(1))*Y2(2) - (1 + Y2(1))^3/3"}},
      {"y(3*t)^2/(3*t + 1)^2 at t0 = 0, Y(0) = 1, Y(1) = 1",
       "y(3*t)^2/(3*t + 1)^2",
       {"y"},
       0.0,
       {{"Y(0)", 1.0}, {"Y(1)", 1.0}},
       {"1", "0", "18*Y(2)", "-54*Y(2) + 54*Y(3)",
        "81*Y(2)^2 + 162*Y(2) - 162*Y(3) + 162*Y(4)"}},
  };
  return list;
}

}  // namespace testing
