#include "mirrorvis/io.hpp"

#include <cstdio>

namespace mirrorvis::io {

std::string format_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_meta(std::ostream& os, const std::map<std::string, std::string>& meta) {
  for (const auto& [key, value] : meta) os << "# " << key << " = " << value << "\n";
}

}  // namespace

void write_curve_csv(std::ostream& os, const exact::VisibilityCurve& curve) {
  write_meta(os, curve.meta);
  os << "t_rad,re_f,im_f,visibility\n";
  for (const auto& s : curve.samples) {
    os << format_real(s.t) << ',' << format_real(s.f.real()) << ','
       << format_real(s.f.imag()) << ',' << format_real(s.nu) << '\n';
  }
}

void write_estimate_csv(std::ostream& os, const unravel::EnsembleEstimate& est,
                        const std::map<std::string, std::string>& meta) {
  write_meta(os, meta);
  os << "t_rad,re_f,im_f,visibility,stderr\n";
  for (const auto& r : est.records) {
    os << format_real(r.t) << ',' << format_real(r.mean_f.real()) << ','
       << format_real(r.mean_f.imag()) << ',' << format_real(std::abs(r.mean_f))
       << ',' << format_real(r.stderr_f) << '\n';
  }
}

}  // namespace mirrorvis::io
