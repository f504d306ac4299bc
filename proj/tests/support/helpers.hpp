#pragma once

#include <vector>

#include "forage/genome.hpp"
#include "forage/trial.hpp"

namespace testsupport {

// genome over the standard 15-input / bias / 3-output interface with the
// given connections (innovations auto-numbered)
inline forage::Genome interface_genome(
    const std::vector<std::tuple<int, int, double>>& links = {}) {
    forage::Genome g;
    for (int i = 0; i < 15; ++i) g.nodes.push_back({i, forage::NodeKind::Input});
    g.nodes.push_back({15, forage::NodeKind::Bias});
    for (int o = 0; o < 3; ++o) g.nodes.push_back({16 + o, forage::NodeKind::Output});
    int innovation = 1;
    for (auto [from, to, weight] : links)
        g.insert_connection({from, to, weight, true, innovation++});
    return g;
}

// small custom-shape genome for network unit tests
inline forage::Genome custom_genome(
    const std::vector<std::pair<int, forage::NodeKind>>& nodes,
    const std::vector<std::tuple<int, int, double, bool>>& links) {
    forage::Genome g;
    for (auto [id, kind] : nodes) g.insert_node({id, kind});
    int innovation = 1;
    for (auto [from, to, weight, enabled] : links)
        g.insert_connection({from, to, weight, enabled, innovation++});
    return g;
}

// short-trial context that keeps unit tests fast
inline forage::TrialContext small_context() {
    forage::TrialContext ctx;
    ctx.arena.trial_ticks = 400;
    ctx.arena.resource_count = 32;
    ctx.distribution = forage::Distribution::Uniform;
    ctx.sample_stride = 20;
    return ctx;
}

} // namespace testsupport
