#pragma once

#include <string>
#include <vector>

namespace qaoacut {

/// Depth-p QAOA parameters: layer k applies exp(-i gammas[k] C) then
/// exp(-i betas[k] B) with B the sum of Pauli X.
class QaoaAngles {
public:
    QaoaAngles() = default;
    QaoaAngles(std::vector<double> gammas, std::vector<double> betas);

    static QaoaAngles zeros(int p);

    int p() const { return static_cast<int>(gammas_.size()); }
    const std::vector<double> &gammas() const { return gammas_; }
    const std::vector<double> &betas() const { return betas_; }

    /// Stable text digest used to key expectation tables.
    std::string digest() const;

    friend bool operator==(const QaoaAngles &, const QaoaAngles &) = default;

private:
    std::vector<double> gammas_;
    std::vector<double> betas_;
};

/// Angle file: {"p", "gammas", "betas", "source"} (extra fields ignored).
struct AngleFile {
    QaoaAngles angles;
    std::string source;
};

AngleFile read_angle_file(const std::string &path);
std::string angle_file_json(const QaoaAngles &angles, const std::string &source, double tree_value);

} // namespace qaoacut
