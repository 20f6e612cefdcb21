#include <ostream>

#include "rdrl/env/driving_env.hpp"

namespace rdrl::env {

void write_trace_header(std::ostream& out) {
  out << "t,x,y,speed,throttle,steer,r_lc,r_ttc,r_safe,r_efficient,r_comfort,r_energy,"
         "r_arrive,r_total,ttc\n";
}

void write_trace_row(std::ostream& out, const StepResult& step) {
  const auto& i = step.info;
  const auto& r = step.reward;
  out << i.time << ',' << i.position.x() << ',' << i.position.y() << ',' << i.speed << ','
      << i.throttle << ',' << i.steer << ',' << r.r_lc << ',' << r.r_ttc << ',' << r.r_safe << ','
      << r.r_efficient << ',' << r.r_comfort << ',' << r.r_energy << ',' << r.r_arrive << ','
      << r.r_total << ',' << i.ttc << '\n';
}

}  // namespace rdrl::env
