#pragma once

// Partition links into cooperative and interfering sets under each strategy
// and compute the SINR and instantaneous rate of one realization.

#include <cstddef>
#include <vector>

#include "fractalcomp/channel.hpp"
#include "fractalcomp/model.hpp"

namespace fractalcomp {

struct Partition {
    std::vector<Link> coop;
    std::vector<Link> interf;
};

// The k nearest links cooperate, the rest interfere. Requires links sorted
// ascending by distance. k beyond the link count leaves interf empty (the
// caller should treat that as a window-truncation event).
Partition select_distance(const std::vector<Link>& links, int k);

// Links whose instantaneous received power P_s h r^(-alpha) meets the
// threshold cooperate; an empty cooperative set is legal (that trial
// contributes rate 0).
Partition select_power(const std::vector<Link>& links, double t);

// (sum coop power) / (sum interf power + sigma2). Empty coop gives 0; a zero
// denominator with nonempty coop returns +infinity as a sentinel for the
// caller. Throws nothing.
double sinr(const Partition& p, double sigma2);

// w * ln(1 + SINR); 0 when the cooperative set is empty.
double inst_rate(const Partition& p, const NetworkConfig& config);

std::size_t coop_count(const Partition& p);

}  // namespace fractalcomp
