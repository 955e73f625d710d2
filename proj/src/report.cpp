#include "fck/report.hpp"

#include <sstream>

namespace fck {

std::string short_decimal(const Real& x, int digits) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits) << x;
  return os.str();
}

}  // namespace fck
