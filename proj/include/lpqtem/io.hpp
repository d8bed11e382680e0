#pragma once

#include "lpqtem/kernel.hpp"
#include "lpqtem/reconstruct.hpp"
#include "lpqtem/tem.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lpq {

// Full round-trip precision for every emitted real.
std::string format_real(double v);

// device_id,fire_index,time,recovered_value; fire_index starts at 1.
void write_events_csv(std::ostream& os, const TemOutput& out);
// Fills times and values of `out.devices`; cfg and horizon are left untouched.
void read_events_csv(std::istream& is, TemOutput& out, std::size_t device_count);

// iter,error_lpq,ratio; the ratio column is empty at iter 0.
void write_convergence_csv(std::ostream& os, const ReconstructionReport& rep);

// k1,k2,c over the coefficient window.
void write_vsignal_csv(std::ostream& os, const VSignal& f);
VSignal read_vsignal_csv(std::istream& is, const Generator& g);

// Writes `text` to dir/name, creating dir; returns the path.
std::string write_file(const std::string& dir, const std::string& name, const std::string& text);

}  // namespace lpq
