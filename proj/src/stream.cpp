#include "hug/stream.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>

#include "hug/recording_io.hpp"

namespace hug::stream {

StreamClassifier::StreamClassifier(const FrameParams& params, symbolizer::SymbolDictionary dictionary,
                                   hmm::ClassifierBank bank, StreamConfig config)
    : processor_(params),
      tracker_(tracker::default_config(params)),
      dictionary_(std::move(dictionary)),
      bank_(std::move(bank)),
      hash_(dictionary_.hash()),
      config_(config) {
    if (hash_ != bank_.dictionary_hash) throw DataError("dictionary hash does not match the model bank");
    if (config_.window == 0) throw DataError("stream window must be at least one frame");
}

std::optional<StreamEvent> StreamClassifier::push(const CMatrix& frame) {
    const auto fv = tracker_.push(processor_.process_frame(frame, frames_));
    window_.push_back(dictionary_.encode(fv));
    if (window_.size() > config_.window) window_.pop_front();
    ++frames_;
    if (window_.size() < config_.window) return std::nullopt;
    return decide();
}

std::optional<StreamEvent> StreamClassifier::flush() {
    if (window_.empty() || window_.size() >= config_.window) return std::nullopt;
    return decide();
}

std::optional<StreamEvent> StreamClassifier::decide() {
    const std::vector<hmm::Symbol> seq(window_.begin(), window_.end());
    const auto c = hmm::classify(bank_, seq, hash_);
    const double post = c.posterior[c.map_index];
    if (post < config_.threshold) return std::nullopt;
    return StreamEvent{frames_ - 1, c.map_class, post};
}

std::string format_event(const StreamEvent& e) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu %s %.4f", e.frame_index, std::string(class_name(e.gesture)).c_str(),
                  e.posterior);
    return buf;
}

namespace {

// Single-producer single-consumer bounded queue of frames.
class FrameQueue {
public:
    explicit FrameQueue(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

    void push(CMatrix frame) {
        std::unique_lock lock(mu_);
        not_full_.wait(lock, [&] { return q_.size() < capacity_ || cancelled_; });
        if (cancelled_) return;
        q_.push_back(std::move(frame));
        not_empty_.notify_one();
    }
    void close(std::exception_ptr error = nullptr) {
        std::lock_guard lock(mu_);
        closed_ = true;
        error_ = error;
        not_empty_.notify_all();
    }
    void cancel() {
        std::lock_guard lock(mu_);
        cancelled_ = true;
        not_full_.notify_all();
    }
    bool cancelled() {
        std::lock_guard lock(mu_);
        return cancelled_;
    }
    // False once the queue is closed and drained.
    bool pop(CMatrix& out) {
        std::unique_lock lock(mu_);
        not_empty_.wait(lock, [&] { return !q_.empty() || closed_; });
        if (q_.empty()) return false;
        out = std::move(q_.front());
        q_.pop_front();
        not_full_.notify_one();
        return true;
    }
    std::exception_ptr error() {
        std::lock_guard lock(mu_);
        return error_;
    }

private:
    std::size_t capacity_;
    std::deque<CMatrix> q_;
    std::mutex mu_;
    std::condition_variable not_full_, not_empty_;
    bool closed_ = false;
    bool cancelled_ = false;
    std::exception_ptr error_;
};

}  // namespace

StreamStats run_stream(std::istream& in, const symbolizer::SymbolDictionary& dictionary,
                       const hmm::ClassifierBank& bank, const StreamConfig& config, std::ostream& out) {
    io::BinaryReader reader(in);
    const io::RecordingHeader header = io::read_recording_header(reader);
    StreamClassifier classifier(header.params, dictionary, bank, config);

    FrameQueue queue(config.queue_capacity);
    std::thread producer([&] {
        try {
            std::uint64_t n = 0;
            CMatrix frame;
            while (header.frame_count == io::kUnboundedFrames || n < header.frame_count) {
                if (queue.cancelled()) break;
                const auto at = reader.offset();
                if (!io::read_frame(reader, header.params, frame)) {
                    if (header.frame_count != io::kUnboundedFrames)
                        throw FormatError("stream ended after " + std::to_string(n) + " of " +
                                              std::to_string(header.frame_count) + " frames",
                                          at);
                    break;
                }
                queue.push(std::move(frame));
                ++n;
            }
            queue.close();
        } catch (...) {
            queue.close(std::current_exception());
        }
    });

    StreamStats stats;
    const auto t0 = std::chrono::steady_clock::now();
    auto emit = [&](const std::optional<StreamEvent>& e) {
        if (!e) return;
        out << format_event(*e) << '\n';
        out.flush();
        ++stats.events;
    };
    try {
        CMatrix frame;
        while (queue.pop(frame)) emit(classifier.push(frame));
        emit(classifier.flush());
    } catch (...) {
        queue.cancel();
        producer.join();
        throw;
    }
    producer.join();
    stats.frames = classifier.frames();
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (auto err = queue.error()) std::rethrow_exception(err);
    return stats;
}

FdStreambuf::~FdStreambuf() {
    if (fd_ >= 0) ::close(fd_);
}

FdStreambuf::int_type FdStreambuf::underflow() {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    for (;;) {
        const ssize_t n = ::read(fd_, buf_, sizeof buf_);
        if (n > 0) {
            setg(buf_, buf_, buf_ + n);
            return traits_type::to_int_type(*gptr());
        }
        if (n < 0 && errno == EINTR) continue;
        return traits_type::eof();
    }
}

int listen_on(std::uint16_t port, std::uint16_t* bound_port) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw DataError(std::string("socket: ") + std::strerror(errno));
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd, 1) < 0) {
        const std::string why = std::strerror(errno);
        ::close(fd);
        throw DataError("cannot listen on port " + std::to_string(port) + ": " + why);
    }
    if (bound_port) {
        socklen_t len = sizeof addr;
        ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
        *bound_port = ntohs(addr.sin_port);
    }
    return fd;
}

int accept_on(int listen_fd) {
    int c;
    do {
        c = ::accept(listen_fd, nullptr, nullptr);
    } while (c < 0 && errno == EINTR);
    const int saved = errno;
    ::close(listen_fd);
    if (c < 0) throw DataError(std::string("accept: ") + std::strerror(saved));
    return c;
}

}  // namespace hug::stream
