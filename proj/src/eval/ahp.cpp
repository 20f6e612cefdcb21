#include "rdrl/eval/ahp.hpp"

namespace rdrl::eval {

double random_index(int n) {
  static constexpr double kTable[] = {0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45};
  if (n < 3 || n > 9) throw AhpError("random index is tabulated for n = 3..9 only");
  return kTable[n - 3];
}

}  // namespace rdrl::eval
