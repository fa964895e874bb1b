#pragma once

#include <complex>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace qsim::dist {

using cdouble = std::complex<double>;

/// Amplitude chunks use ForwardExchange/ReturnExchange; the remaining codes
/// carry the collective operations the transport contract requires (they
/// reuse the same 24-byte header + 16-byte-slot framing on the wire).
enum class MsgPhase : uint8_t {
  ForwardExchange = 0,
  ReturnExchange = 1,
  Gather = 2,
  Reduce = 3,
  Barrier = 4,
};

struct ChunkHeader {
  uint64_t gate_seq = 0;
  uint32_t chunk_index = 0;
  uint32_t count = 0;  // payload amplitudes
  MsgPhase phase = MsgPhase::ForwardExchange;
};

struct Message {
  ChunkHeader header;
  std::vector<cdouble> payload;
};

struct TransportStats {
  uint64_t amp_messages_sent = 0;  // ForwardExchange + ReturnExchange only
  uint64_t amps_sent = 0;
  uint64_t control_messages_sent = 0;
};

/// Reliable, per-peer-ordered message transport between 2^p ranks. barrier()
/// and allreduce_sum() are implemented once over send/receive (rank 0 hub,
/// partials combined in rank order) so every backend produces byte-identical
/// collective results.
class Transport {
 public:
  virtual ~Transport() = default;

  virtual uint32_t rank() const = 0;
  virtual uint32_t world_size() const = 0;
  virtual void send(uint32_t to_rank, const ChunkHeader& header,
                    std::span<const cdouble> payload) = 0;
  /// Blocks until the next message from the given peer arrives.
  virtual Message receive(uint32_t from_rank) = 0;

  void barrier();
  void allreduce_sum(std::span<double> values);

  const TransportStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

 protected:
  void count_send(const ChunkHeader& header);
  TransportStats stats_;
  uint64_t control_seq_ = 0;
};

/// Shared mailbox hub for in-process ranks (one worker thread per rank).
class InProcessHub {
 public:
  explicit InProcessHub(uint32_t world_size);
  uint32_t world_size() const { return size_; }
  void push(uint32_t src, uint32_t dst, Message msg);
  Message pop(uint32_t src, uint32_t dst);

 private:
  struct Mailbox {
    std::mutex mutex;
    std::condition_variable ready;
    std::deque<Message> queue;
  };
  uint32_t size_;
  std::vector<std::unique_ptr<Mailbox>> boxes_;  // [src * size_ + dst]
};

class InProcessTransport : public Transport {
 public:
  InProcessTransport(InProcessHub& hub, uint32_t rank) : hub_(hub), rank_(rank) {}
  uint32_t rank() const override { return rank_; }
  uint32_t world_size() const override { return hub_.world_size(); }
  void send(uint32_t to_rank, const ChunkHeader& header,
            std::span<const cdouble> payload) override;
  Message receive(uint32_t from_rank) override;

 private:
  InProcessHub& hub_;
  uint32_t rank_;
};

struct TcpEndpoint {
  std::string host;
  uint16_t port = 0;
};

/// One socket per peer pair: rank r accepts from lower ranks and connects to
/// higher ones. Each connection starts with the `QSV1` magic plus the
/// sender's rank id; a reader thread per socket keeps the stream drained so
/// symmetric bulk sends cannot deadlock.
class TcpTransport : public Transport {
 public:
  TcpTransport(uint32_t rank, std::vector<TcpEndpoint> peers);
  ~TcpTransport() override;

  uint32_t rank() const override { return rank_; }
  uint32_t world_size() const override { return static_cast<uint32_t>(peers_.size()); }
  void send(uint32_t to_rank, const ChunkHeader& header,
            std::span<const cdouble> payload) override;
  Message receive(uint32_t from_rank) override;

 private:
  struct Peer {
    int fd = -1;
    std::mutex send_mutex;
    std::mutex mutex;
    std::condition_variable ready;
    std::deque<Message> queue;
    bool closed = false;
    std::thread reader;
  };
  void reader_loop(uint32_t peer_rank);

  uint32_t rank_;
  std::vector<TcpEndpoint> peers_;
  std::vector<std::unique_ptr<Peer>> links_;
};

}  // namespace qsim::dist
