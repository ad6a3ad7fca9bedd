#include "qaoacut/classical.hpp"

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "qaoacut/errors.hpp"
#include "qaoacut/rng.hpp"

namespace qaoacut {

int cut_value(const Graph &g, std::span<const std::uint8_t> bits) {
    if (bits.size() != g.num_vertices()) {
        throw InputError("bitstring length " + std::to_string(bits.size()) + " does not match n=" +
                         std::to_string(g.num_vertices()));
    }
    int cut = 0;
    for (const Edge &e : g.edges()) {
        cut += bits[e.u] != bits[e.v] ? 1 : 0;
    }
    return cut;
}

namespace {

// Cut change from flipping v: same-side neighbours become cut, the rest stop.
int flip_gain(const Graph &g, std::span<const std::uint8_t> bits, Vertex v) {
    int gain = 0;
    for (Vertex w : g.neighbors(v)) {
        gain += bits[w] == bits[v] ? 1 : -1;
    }
    return gain;
}

} // namespace

bool is_flip_local_optimum(const Graph &g, std::span<const std::uint8_t> bits) {
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (flip_gain(g, bits, v) > 0) {
            return false;
        }
    }
    return true;
}

FlipResult flip_solve(const Graph &g, std::uint64_t seed) {
    const std::size_t n = g.num_vertices();
    CounterRng rng(seed, 0xf11f);
    FlipResult r;
    r.bits.resize(n);
    for (auto &b : r.bits) {
        b = rng.coin() ? 1 : 0;
    }
    r.cut = cut_value(g, r.bits);
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    bool flipped = true;
    while (flipped) {
        flipped = false;
        rng.shuffle(order);
        ++r.sweeps;
        for (Vertex v : order) {
            const int gain = flip_gain(g, r.bits, v);
            if (gain > 0) {
                r.bits[v] ^= 1;
                r.cut += gain;
                flipped = true;
            }
        }
    }
    return r;
}

PerformanceProfile::PerformanceProfile(std::string instance, std::uint64_t seed, std::size_t edges)
    : instance_(std::move(instance)), seed_(seed), edges_(edges) {}

void PerformanceProfile::record(double elapsed, int cut) {
    if (!trace_.empty()) {
        if (!(elapsed > trace_.back().elapsed)) {
            throw ContractViolation("profile time must strictly increase");
        }
        if (cut < trace_.back().cut) {
            throw ContractViolation("profile cut must not decrease");
        }
    }
    if (elapsed < 0.0 || cut < 0 || static_cast<std::size_t>(cut) > edges_) {
        throw ContractViolation("profile point (" + std::to_string(elapsed) + ", " + std::to_string(cut) +
                                ") out of range");
    }
    trace_.push_back({elapsed, cut});
}

std::optional<double> PerformanceProfile::t0() const {
    if (trace_.empty()) {
        return std::nullopt;
    }
    return trace_.front().elapsed;
}

std::optional<double> PerformanceProfile::zero_time_quality() const {
    if (trace_.empty() || edges_ == 0) {
        return std::nullopt;
    }
    return static_cast<double>(trace_.front().cut) / static_cast<double>(edges_);
}

std::optional<int> PerformanceProfile::final_cut() const {
    if (trace_.empty()) {
        return std::nullopt;
    }
    return trace_.back().cut;
}

std::optional<int> PerformanceProfile::cut_at(double t) const {
    std::optional<int> best;
    for (const auto &pt : trace_) {
        if (pt.elapsed > t) {
            break;
        }
        best = pt.cut;
    }
    return best;
}

ProfileStatus PerformanceProfile::status() const {
    if (invalid_) {
        return ProfileStatus::Invalid;
    }
    return trace_.empty() ? ProfileStatus::Empty : ProfileStatus::Ok;
}

void PerformanceProfile::mark_invalid(std::string why) {
    invalid_ = true;
    diagnostics_.push_back(std::move(why));
}

PerformanceProfile flip_multistart(const RegularGraph &g, double budget_seconds, std::uint64_t seed,
                                   std::string instance, std::optional<Clock::time_point> start,
                                   const std::function<void(const Improvement &)> &on_improve) {
    if (!(budget_seconds > 0.0)) {
        throw ParameterError("budget must be positive");
    }
    const Clock::time_point t_start = start.value_or(Clock::now());
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t_start).count(); };
    PerformanceProfile profile(std::move(instance), seed, g.num_edges());
    for (std::uint64_t restart = 0;; ++restart) {
        FlipResult r = flip_solve(g, CounterRng::derive(seed, restart));
        const double t = elapsed();
        if (profile.empty() || r.cut > *profile.final_cut()) {
            // Guard against equal timestamps from a coarse clock.
            const double stamp = profile.empty() ? t : std::max(t, std::nextafter(profile.trace().back().elapsed, 1e300));
            profile.record(stamp, r.cut);
            if (on_improve) {
                on_improve({stamp, r.cut, &r.bits});
            }
        }
        if (t >= budget_seconds) {
            break;
        }
    }
    return profile;
}

ExactCut exact_maxcut(const Graph &g, int cap) {
    const int n = static_cast<int>(g.num_vertices());
    if (cap > kMaxExactCap) {
        throw ParameterError("exact cap may not exceed " + std::to_string(kMaxExactCap));
    }
    if (n > cap) {
        throw CapacityError("exact MaxCut on " + std::to_string(n) + " vertices exceeds cap " + std::to_string(cap));
    }
    ExactCut best;
    best.bits.assign(n, 0);
    if (n <= 1) {
        return best;
    }
    // Gray-code walk over vertices 1..n-1; vertex 0 stays on side 0.
    Bits bits(n, 0);
    int cut = 0;
    const std::uint64_t steps = std::uint64_t{1} << (n - 1);
    for (std::uint64_t i = 1; i < steps; ++i) {
        const Vertex v = static_cast<Vertex>(std::countr_zero(i)) + 1;
        cut += flip_gain(g, bits, v);
        bits[v] ^= 1;
        if (cut > best.cut) {
            best.cut = cut;
            best.bits = bits;
        }
    }
    return best;
}

namespace {

std::string substitute_seed(std::string command, std::uint64_t seed) {
    const std::string token = "{seed}";
    for (std::size_t pos = command.find(token); pos != std::string::npos; pos = command.find(token, pos)) {
        command.replace(pos, token.size(), std::to_string(seed));
    }
    return command;
}

std::string format_budget(double seconds) {
    std::ostringstream ss;
    ss.precision(17);
    ss << seconds;
    return ss.str();
}

void write_all(int fd, const std::string &data) {
    sigset_t pipe_set;
    sigemptyset(&pipe_set);
    sigaddset(&pipe_set, SIGPIPE);
    pthread_sigmask(SIG_BLOCK, &pipe_set, nullptr);
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t w = ::write(fd, data.data() + off, data.size() - off);
        if (w < 0) {
            if (errno == EINTR) {
                continue;
            }
            // The solver closed stdin early; drain the pending SIGPIPE.
            if (errno == EPIPE) {
                const timespec zero{0, 0};
                sigtimedwait(&pipe_set, nullptr, &zero);
            }
            break;
        }
        off += static_cast<std::size_t>(w);
    }
    ::close(fd);
}

class LineParser {
public:
    LineParser(const RegularGraph &g, PerformanceProfile &profile) : g_(g), profile_(profile) {}

    void feed(const char *data, std::size_t len) {
        buffer_.append(data, len);
        for (std::size_t nl = buffer_.find('\n'); nl != std::string::npos; nl = buffer_.find('\n')) {
            handle(buffer_.substr(0, nl));
            buffer_.erase(0, nl + 1);
        }
    }

    void finish() {
        if (!buffer_.empty()) {
            handle(buffer_);
            buffer_.clear();
        }
    }

private:
    void handle(std::string line) {
        ++lineno_;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            return;
        }
        const std::string where = "line " + std::to_string(lineno_) + ": ";
        std::istringstream ss(line);
        std::string tag;
        double t = 0.0;
        long long cut = 0;
        std::string bitstring;
        std::string extra;
        if (!(ss >> tag) || tag != "IMPROVED" || !(ss >> t) || !(ss >> cut)) {
            profile_.mark_invalid(where + "unparseable '" + line + "'");
            return;
        }
        ss >> bitstring;
        if (ss >> extra) {
            profile_.mark_invalid(where + "trailing fields in '" + line + "'");
            return;
        }
        if (cut < 0 || static_cast<std::size_t>(cut) > g_.num_edges()) {
            profile_.mark_invalid(where + "cut " + std::to_string(cut) + " exceeds M=" +
                                  std::to_string(g_.num_edges()));
            return;
        }
        if (!bitstring.empty()) {
            if (bitstring.size() != g_.num_vertices() || bitstring.find_first_not_of("01") != std::string::npos) {
                profile_.mark_invalid(where + "bitstring is not a 0/1 string of length n");
                return;
            }
            Bits bits(bitstring.size());
            for (std::size_t i = 0; i < bits.size(); ++i) {
                bits[i] = bitstring[i] == '1' ? 1 : 0;
            }
            const int actual = cut_value(g_.graph(), bits);
            if (actual != cut) {
                profile_.mark_invalid(where + "reported cut " + std::to_string(cut) + " but bitstring cuts " +
                                      std::to_string(actual));
                return;
            }
        }
        try {
            profile_.record(t, static_cast<int>(cut));
        } catch (const ContractViolation &e) {
            profile_.mark_invalid(where + e.what());
        }
    }

    const RegularGraph &g_;
    PerformanceProfile &profile_;
    std::string buffer_;
    int lineno_ = 0;
};

} // namespace

PerformanceProfile run_external(const std::string &command_template, const RegularGraph &g, double budget_seconds,
                                std::uint64_t seed, std::string instance, const ExternalOptions &options) {
    if (!(budget_seconds > 0.0)) {
        throw ParameterError("budget must be positive");
    }
    PerformanceProfile profile(std::move(instance), seed, g.num_edges());
    const std::string command =
        "exec " + substitute_seed(command_template, seed) + " --budget " + format_budget(budget_seconds);

    std::ostringstream edge_list;
    write_edge_list(edge_list, g);

    int in_pipe[2];
    int out_pipe[2];
    if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
        throw Error(std::string("pipe: ") + std::strerror(errno));
    }
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        throw Error(std::string("pipe: ") + std::strerror(errno));
    }
    const pid_t pid = ::fork();
    if (pid < 0) {
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) {
            ::close(fd);
        }
        throw Error(std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) {
            ::close(fd);
        }
        ::execl(options.shell.c_str(), options.shell.c_str(), "-c", command.c_str(), static_cast<char *>(nullptr));
        ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    const auto start = Clock::now();
    std::thread writer(write_all, in_pipe[1], edge_list.str());

    LineParser parser(g, profile);
    auto since_start = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
    bool terminated = false;
    bool killed = false;
    bool eof = false;
    char buf[4096];
    while (!eof) {
        const double now = since_start();
        if (!terminated && now >= budget_seconds) {
            ::kill(pid, SIGTERM);
            terminated = true;
        }
        if (terminated && !killed && now >= budget_seconds + options.kill_grace_seconds) {
            ::kill(pid, SIGKILL);
            killed = true;
        }
        const double deadline = !terminated ? budget_seconds
                                : !killed   ? budget_seconds + options.kill_grace_seconds
                                            : now + 1.0;
        const int timeout_ms = std::max(1, static_cast<int>((deadline - now) * 1000.0) + 1);
        pollfd pfd{out_pipe[0], POLLIN, 0};
        const int ready = ::poll(&pfd, 1, timeout_ms);
        if (ready < 0) {
            if (errno == EINTR) {
                continue;
            }
            break;
        }
        if (ready == 0) {
            if (killed) {
                break;
            }
            continue;
        }
        const ssize_t got = ::read(out_pipe[0], buf, sizeof buf);
        if (got < 0 && errno == EINTR) {
            continue;
        }
        if (got <= 0) {
            eof = true;
        } else {
            parser.feed(buf, static_cast<std::size_t>(got));
        }
    }
    parser.finish();
    ::close(out_pipe[0]);
    if (!killed) {
        // Stdout closed; make sure the process itself ends within the grace period.
        const double give_up = std::max(since_start(), budget_seconds) + options.kill_grace_seconds;
        int status = 0;
        while (::waitpid(pid, &status, WNOHANG) == 0) {
            if (since_start() >= give_up) {
                ::kill(pid, SIGKILL);
                killed = true;
                ::waitpid(pid, &status, 0);
                break;
            }
            if (since_start() >= budget_seconds && !terminated) {
                ::kill(pid, SIGTERM);
                terminated = true;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
        }
        if (!killed) {
            if (WIFEXITED(status) && WEXITSTATUS(status) != 0) {
                profile.mark_invalid("solver exited with status " + std::to_string(WEXITSTATUS(status)));
            } else if (WIFSIGNALED(status) && !(terminated && WTERMSIG(status) == SIGTERM)) {
                profile.mark_invalid("solver died from signal " + std::to_string(WTERMSIG(status)));
            }
        }
    } else {
        int status = 0;
        ::waitpid(pid, &status, 0);
        profile.note("solver ignored SIGTERM and was killed");
    }
    writer.join();
    if (profile.empty() && profile.status() != ProfileStatus::Invalid) {
        profile.note("no solution reported before the budget; t0 undefined");
    }
    return profile;
}

} // namespace qaoacut
