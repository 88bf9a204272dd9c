#pragma once

#include <cstdint>
#include <deque>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <streambuf>

#include "hug/hmm.hpp"
#include "hug/rdproc.hpp"
#include "hug/symbolizer.hpp"
#include "hug/tracker.hpp"

namespace hug::stream {

struct StreamConfig {
    std::size_t window = 30;         // symbols per decision
    double threshold = 0.8;          // minimum MAP posterior to report
    std::size_t queue_capacity = 16; // frames buffered between reader and classifier
};

struct StreamEvent {
    std::size_t frame_index = 0;
    GestureClass gesture = GestureClass::no_finger;
    double posterior = 0.0;
};

/// Frame-at-a-time classifier: process, track, symbolise, then score the
/// last `window` symbols against every class model.
class StreamClassifier {
public:
    StreamClassifier(const FrameParams& params, symbolizer::SymbolDictionary dictionary, hmm::ClassifierBank bank,
                     StreamConfig config);

    /// Consumes one frame; returns an event once the window is full and the
    /// MAP posterior reaches the threshold.
    std::optional<StreamEvent> push(const CMatrix& frame);
    /// End of input. Scores a window that never filled up (short streams).
    std::optional<StreamEvent> flush();

    std::size_t frames() const noexcept { return frames_; }

private:
    std::optional<StreamEvent> decide();

    rdproc::Processor processor_;
    tracker::Tracker tracker_;
    symbolizer::SymbolDictionary dictionary_;
    hmm::ClassifierBank bank_;
    std::uint64_t hash_;
    StreamConfig config_;
    std::deque<hmm::Symbol> window_;
    std::size_t frames_ = 0;
};

struct StreamStats {
    std::size_t frames = 0;
    std::size_t events = 0;
    double seconds = 0.0;
};

/// Reads a HUGR header and frames from `in` on a reader thread, classifies on
/// the calling thread and writes one `frame_index class posterior` line per
/// event to `out`. The bounded queue blocks the reader when full. A malformed
/// header or a truncated frame throws FormatError naming the byte offset,
/// after the frames before it have been handled.
StreamStats run_stream(std::istream& in, const symbolizer::SymbolDictionary& dictionary,
                       const hmm::ClassifierBank& bank, const StreamConfig& config, std::ostream& out);

std::string format_event(const StreamEvent& e);

/// Read-only streambuf over a file descriptor; closes it on destruction.
class FdStreambuf : public std::streambuf {
public:
    explicit FdStreambuf(int fd) : fd_(fd) {}
    ~FdStreambuf() override;
    FdStreambuf(const FdStreambuf&) = delete;
    FdStreambuf& operator=(const FdStreambuf&) = delete;

protected:
    int_type underflow() override;

private:
    int fd_;
    char buf_[1 << 16];
};

/// Listening socket on 127.0.0.1:port; port 0 picks a free one, reported
/// through `bound_port`. Throws DataError on failure.
int listen_on(std::uint16_t port, std::uint16_t* bound_port = nullptr);
/// Accepts one connection and closes the listening socket.
int accept_on(int listen_fd);

}  // namespace hug::stream
