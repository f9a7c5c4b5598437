#include "folcc/jet.hpp"

#include <cmath>
#include <sstream>
#include <iomanip>

namespace folcc {

FrameCoordsX FrameCoordsX::from_y(const FrameCoordsY<double>& y) {
  if (y.y.size() < 2 || y.y[1] == 0.0) throw RegularityError("y1 must be nonzero");
  FrameCoordsX x{y.y};
  x.x[1] = std::log(std::fabs(y.y[1]));
  return x;
}

FrameCoordsY<double> FrameCoordsX::to_y() const {
  FrameCoordsY<double> y{x};
  y.y[1] = std::exp(x[1]);
  return y;
}

FrameCoordsX lift_s2_by_conjugation(const Jet<double>& h, const FrameCoordsX& coords) {
  const Jet<double> frame = coords.to_y().to_jet();
  return FrameCoordsX::from_y(FrameCoordsY<double>::from_jet(prolong(h, frame)));
}

FrameCoordsX lift_s2(const Jet<double>& h, const FrameCoordsX& coords) {
  const int q = coords.order();
  if (q < 1) throw ArgumentError("lift_s2 needs at least x0 and x1");
  if (h.order() < q) throw ArgumentError("lift_s2: h stack shorter than the coordinates");
  if (!h.regular()) throw RegularityError("lift_s2: h is not regular at x0");
  const double h1 = h.derivative(1);
  FrameCoordsX out = q >= 4 ? lift_s2_by_conjugation(h, coords) : coords;
  const auto& x = coords.x;
  out.x[0] = h.value();
  out.x[1] = x[1] + std::log(std::fabs(h1));
  if (q >= 2) out.x[2] = x[2] / h1 + h.derivative(2) / (h1 * h1);
  if (q >= 3) {
    const double h2 = h.derivative(2), h3 = h.derivative(3);
    out.x[3] = x[3] / (h1 * h1) + 3.0 * h2 * x[2] / (h1 * h1 * h1) + h3 / (h1 * h1 * h1);
  }
  return out;
}

namespace {
std::string num_to_string(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}
std::string num_to_string(const Rational& v) { return to_string(v); }
}  // namespace

template <class T>
std::vector<std::string> jet_to_strings(const Jet<T>& j) {
  std::vector<std::string> out{num_to_string(j.base())};
  for (const T& d : j.derivatives()) out.push_back(num_to_string(d));
  return out;
}

template std::vector<std::string> jet_to_strings(const Jet<double>&);
template std::vector<std::string> jet_to_strings(const Jet<Rational>&);

}  // namespace folcc
