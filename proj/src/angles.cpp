#include "qaoacut/angles.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "qaoacut/errors.hpp"
#include "qaoacut/rng.hpp"

namespace qaoacut {

QaoaAngles::QaoaAngles(std::vector<double> gammas, std::vector<double> betas)
    : gammas_(std::move(gammas)), betas_(std::move(betas)) {
    if (gammas_.size() != betas_.size()) {
        throw ParameterError("gammas and betas must have the same length");
    }
    for (std::size_t i = 0; i < gammas_.size(); ++i) {
        if (!std::isfinite(gammas_[i]) || !std::isfinite(betas_[i])) {
            throw ParameterError("QAOA angles must be finite");
        }
    }
}

QaoaAngles QaoaAngles::zeros(int p) {
    return QaoaAngles(std::vector<double>(p, 0.0), std::vector<double>(p, 0.0));
}

std::string QaoaAngles::digest() const {
    std::uint64_t h = CounterRng::mix(static_cast<std::uint64_t>(p()) + 0x51ed);
    auto absorb = [&](double x) {
        std::uint64_t bits = 0;
        static_assert(sizeof(bits) == sizeof(x));
        std::memcpy(&bits, &x, sizeof(x));
        h = CounterRng::mix(h ^ bits);
    };
    for (double g : gammas_) {
        absorb(g);
    }
    for (double b : betas_) {
        absorb(b);
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "p%d-%016llx", p(), static_cast<unsigned long long>(h));
    return buf;
}

AngleFile read_angle_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open angle file " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
        AngleFile file{QaoaAngles(j.at("gammas").get<std::vector<double>>(), j.at("betas").get<std::vector<double>>()),
                       j.value("source", std::string{})};
        if (j.contains("p") && j.at("p").get<int>() != file.angles.p()) {
            throw InputError("angle file " + path + ": p does not match the angle count");
        }
        return file;
    } catch (const nlohmann::json::exception &e) {
        throw InputError("angle file " + path + ": " + e.what());
    }
}

std::string angle_file_json(const QaoaAngles &angles, const std::string &source, double tree_value) {
    nlohmann::json j;
    j["p"] = angles.p();
    j["gammas"] = angles.gammas();
    j["betas"] = angles.betas();
    j["source"] = source;
    j["tree_value"] = tree_value;
    return j.dump(2);
}

} // namespace qaoacut
