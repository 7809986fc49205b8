#ifndef AILS_AHD_SUBPROCESS_HPP
#define AILS_AHD_SUBPROCESS_HPP

#include <string>
#include <vector>

namespace ails::ahd {

// Child process speaking a newline-delimited request/response protocol over
// stdin/stdout. All reads and writes carry deadlines; a missed deadline
// kills the child (candidate programs must never stall the evaluator).
class LineProcess {
public:
    explicit LineProcess(std::vector<std::string> argv);
    ~LineProcess();

    LineProcess(const LineProcess&) = delete;
    LineProcess& operator=(const LineProcess&) = delete;

    bool running() const { return pid_ > 0; }

    // Returns false on timeout or broken pipe; the child is killed.
    bool write_line(const std::string& line, double timeout_s);
    bool read_line(std::string& out, double timeout_s);

    void terminate();

private:
    int pid_ = -1;
    int in_fd_ = -1;   // our write end (child stdin)
    int out_fd_ = -1;  // our read end (child stdout)
    std::string buffer_;
};

}  // namespace ails::ahd

#endif
