#include "ssg/bench.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ssg/io.hpp"

namespace ssg {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Job {
    std::string spec;
    Algorithm algorithm;
};

struct Running {
    pid_t pid;
    int fd;
    Job job;
    std::chrono::steady_clock::time_point started;
    std::string output;
};

BenchRecord base_record(const BenchOptions& o, const Job& job) {
    BenchRecord r;
    r.model_name = model_display_name(job.spec);
    r.algorithm = to_string(job.algorithm);
    r.epsilon = o.config.epsilon;
    r.mode = to_string(o.config.mode);
    return r;
}

// Runs inside the worker; the result goes through the pipe as one CSV line.
[[noreturn]] void worker(const BenchOptions& o, const Job& job, int fd) {
    BenchRecord r = base_record(o, job);
    try {
        const SsgModel model = load_model(job.spec);
        SolveOptions so = o.solve;
        so.algorithm = job.algorithm;
        const auto result = solve(model, o.config, so);
        r.iterations = result.iterations;
        r.verification_phases = result.verification_phases;
        r.wall_time_ms = result.wall_time.count() * 1000.0;
        r.status = to_string(result.status);
        r.value_at_initial_lower = result.lower[model.initial()];
        r.value_at_initial_upper = result.upper[model.initial()];
    } catch (const std::exception&) {
        r.status = "error";
    }
    const std::string line = to_csv(r);
    const char* p = line.data();
    std::size_t left = line.size();
    while (left > 0) {
        const ssize_t w = ::write(fd, p, left);
        if (w <= 0) break;
        p += w;
        left -= static_cast<std::size_t>(w);
    }
    ::close(fd);
    std::_Exit(0);
}

BenchRecord parse_record(const std::string& line) {
    BenchRecord r;
    std::istringstream in(line);
    std::string f;
    std::vector<std::string> fields;
    while (std::getline(in, f, ',')) fields.push_back(f);
    if (fields.size() != 10) throw std::runtime_error("malformed worker output");
    r.model_name = fields[0];
    r.algorithm = fields[1];
    r.epsilon = std::stod(fields[2]);
    r.mode = fields[3];
    r.iterations = std::stoull(fields[4]);
    r.verification_phases = std::stoull(fields[5]);
    r.wall_time_ms = std::stod(fields[6]);
    r.status = fields[7];
    r.value_at_initial_lower = std::stod(fields[8]);
    r.value_at_initial_upper = std::stod(fields[9]);
    return r;
}

void drain(Running& run) {
    char buf[4096];
    for (;;) {
        const ssize_t got = ::read(run.fd, buf, sizeof buf);
        if (got <= 0) break;
        run.output.append(buf, static_cast<std::size_t>(got));
    }
}

class CsvSink {
public:
    explicit CsvSink(const std::string& path) {
        if (path.empty()) return;
        fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
        if (fd_ < 0) throw std::runtime_error("cannot open '" + path + "': " + std::strerror(errno));
        struct stat st {};
        if (::fstat(fd_, &st) == 0 && st.st_size == 0) write_line(bench_csv_header() + '\n');
    }
    ~CsvSink() {
        if (fd_ >= 0) ::close(fd_);
    }
    CsvSink(const CsvSink&) = delete;
    CsvSink& operator=(const CsvSink&) = delete;

    void write_line(const std::string& line) {
        if (fd_ < 0) return;
        // One write per record; O_APPEND keeps concurrent appenders apart.
        if (::write(fd_, line.data(), line.size()) != static_cast<ssize_t>(line.size()))
            throw std::runtime_error("short write to bench CSV");
        ::fsync(fd_);
    }

private:
    int fd_ = -1;
};

}  // namespace

std::string bench_csv_header() {
    return "model_name,algorithm,epsilon,mode,iterations,verification_phases,wall_time_ms,status,"
           "value_at_initial_lower,value_at_initial_upper";
}

std::string to_csv(const BenchRecord& r) {
    std::ostringstream out;
    out << r.model_name << ',' << r.algorithm << ',' << fmt(r.epsilon) << ',' << r.mode << ',' << r.iterations << ','
        << r.verification_phases << ',' << fmt(r.wall_time_ms) << ',' << r.status << ','
        << fmt(r.value_at_initial_lower) << ',' << fmt(r.value_at_initial_upper);
    return out.str();
}

std::string model_display_name(const std::string& spec) {
    if (spec.find('/') == std::string::npos && spec.find('.') == std::string::npos) return spec;
    return std::filesystem::path(spec).stem().string();
}

std::vector<BenchRecord> run_bench(const BenchOptions& o) {
    o.config.validate();
    CsvSink sink(o.csv_path);
    std::vector<Job> jobs;
    for (const auto& m : o.models)
        for (auto a : o.algorithms) jobs.push_back({m, a});

    std::vector<BenchRecord> records;
    std::vector<Running> running;
    std::size_t next = 0;
    const std::size_t workers = o.workers == 0 ? 1 : o.workers;

    auto finish = [&](Running& run, bool killed) {
        BenchRecord r;
        if (killed) {
            r = base_record(o, run.job);
            r.status = to_string(SolverStatus::Timeout);
            r.wall_time_ms = o.run_timeout_s * 1000.0;
        } else {
            drain(run);
            try {
                r = parse_record(run.output);
            } catch (const std::exception&) {
                r = base_record(o, run.job);
                r.status = "error";
            }
        }
        ::close(run.fd);
        sink.write_line(to_csv(r) + '\n');
        records.push_back(std::move(r));
    };

    while (next < jobs.size() || !running.empty()) {
        while (next < jobs.size() && running.size() < workers) {
            int fds[2];
            if (::pipe(fds) != 0) throw std::runtime_error("pipe failed");
            std::fflush(nullptr);
            const pid_t pid = ::fork();
            if (pid < 0) throw std::runtime_error("fork failed");
            if (pid == 0) {
                ::close(fds[0]);
                worker(o, jobs[next], fds[1]);
            }
            ::close(fds[1]);
            ::fcntl(fds[0], F_SETFL, O_NONBLOCK);
            running.push_back({pid, fds[0], jobs[next], std::chrono::steady_clock::now(), {}});
            ++next;
        }
        bool progressed = false;
        for (std::size_t i = 0; i < running.size();) {
            auto& run = running[i];
            drain(run);
            int status = 0;
            const pid_t done = ::waitpid(run.pid, &status, WNOHANG);
            bool killed = false;
            if (done == 0 && o.run_timeout_s > 0) {
                const double elapsed =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - run.started).count();
                if (elapsed >= o.run_timeout_s) {
                    ::kill(run.pid, SIGKILL);
                    ::waitpid(run.pid, &status, 0);
                    killed = true;
                }
            }
            if (done == run.pid || killed) {
                finish(run, killed);
                running.erase(running.begin() + static_cast<std::ptrdiff_t>(i));
                progressed = true;
            } else {
                ++i;
            }
        }
        if (!progressed && !running.empty()) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    return records;
}

}  // namespace ssg
