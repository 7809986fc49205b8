#include "ails/ahd/subprocess.hpp"

#include <csignal>
#include <cstring>
#include <chrono>
#include <stdexcept>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace ails::ahd {

namespace {

// A dead child must surface as a write error, not a SIGPIPE.
void ignore_sigpipe_once() {
    static const bool done = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)done;
}

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

LineProcess::LineProcess(std::vector<std::string> argv) {
    if (argv.empty()) throw std::invalid_argument("LineProcess: empty argv");
    ignore_sigpipe_once();

    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
        throw std::runtime_error("LineProcess: pipe() failed");

    const int pid = fork();
    if (pid < 0) throw std::runtime_error("LineProcess: fork() failed");

    if (pid == 0) {
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        close(to_child[0]);
        close(to_child[1]);
        close(from_child[0]);
        close(from_child[1]);
        std::vector<char*> cargv;
        for (auto& a : argv) cargv.push_back(a.data());
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        _exit(127);
    }

    close(to_child[0]);
    close(from_child[1]);
    pid_ = pid;
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
    fcntl(in_fd_, F_SETFL, O_NONBLOCK);
    fcntl(out_fd_, F_SETFL, O_NONBLOCK);
}

LineProcess::~LineProcess() { terminate(); }

void LineProcess::terminate() {
    if (in_fd_ >= 0) close(in_fd_);
    if (out_fd_ >= 0) close(out_fd_);
    in_fd_ = out_fd_ = -1;
    if (pid_ > 0) {
        kill(pid_, SIGKILL);
        int status = 0;
        waitpid(pid_, &status, 0);
        pid_ = -1;
    }
}

bool LineProcess::write_line(const std::string& line, double timeout_s) {
    if (pid_ <= 0) return false;
    const double deadline = now_s() + timeout_s;
    size_t written = 0;
    std::string data = line;
    data.push_back('\n');
    while (written < data.size()) {
        pollfd pfd{in_fd_, POLLOUT, 0};
        const double left = deadline - now_s();
        if (left <= 0 || poll(&pfd, 1, static_cast<int>(left * 1000) + 1) <= 0 ||
            !(pfd.revents & POLLOUT)) {
            terminate();
            return false;
        }
        const ssize_t n = write(in_fd_, data.data() + written, data.size() - written);
        if (n < 0) {
            if (errno == EAGAIN || errno == EINTR) continue;
            terminate();
            return false;
        }
        written += static_cast<size_t>(n);
    }
    return true;
}

bool LineProcess::read_line(std::string& out, double timeout_s) {
    if (pid_ <= 0) return false;
    const double deadline = now_s() + timeout_s;
    while (true) {
        const size_t nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            out = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return true;
        }
        pollfd pfd{out_fd_, POLLIN, 0};
        const double left = deadline - now_s();
        if (left <= 0 || poll(&pfd, 1, static_cast<int>(left * 1000) + 1) <= 0) {
            terminate();
            return false;
        }
        char chunk[4096];
        const ssize_t n = read(out_fd_, chunk, sizeof(chunk));
        if (n > 0) {
            buffer_.append(chunk, static_cast<size_t>(n));
        } else if (n == 0) {
            terminate();
            return false;  // child closed stdout
        } else if (errno != EAGAIN && errno != EINTR) {
            terminate();
            return false;
        }
    }
}

}  // namespace ails::ahd
