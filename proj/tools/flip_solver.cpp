// Stand-alone FLIP solver speaking the external-solver line protocol:
// edge list on stdin, "IMPROVED <seconds> <cut> <bits>" lines on stdout.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qaoacut/classical.hpp"
#include "qaoacut/errors.hpp"

int main(int argc, char **argv) {
    const auto start = qaoacut::Clock::now();
    CLI::App app{"FLIP local search (external-solver protocol)", "qaoacut-flip"};
    double budget = 1.0;
    std::uint64_t seed = 0;
    app.add_option("--budget", budget, "Seconds")->required();
    app.add_option("--seed", seed, "Seed");
    CLI11_PARSE(app, argc, argv);
    try {
        const qaoacut::RegularGraph g = qaoacut::read_edge_list(std::cin);
        std::string line;
        qaoacut::flip_multistart(g, budget, seed, "external", start, [&](const qaoacut::Improvement &imp) {
            line.assign(imp.bits->size(), '0');
            for (std::size_t i = 0; i < imp.bits->size(); ++i) {
                line[i] = (*imp.bits)[i] ? '1' : '0';
            }
            std::printf("IMPROVED %.9f %d %s\n", imp.elapsed, imp.cut, line.c_str());
            std::fflush(stdout);
        });
    } catch (const std::exception &e) {
        std::cerr << "qaoacut-flip: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
