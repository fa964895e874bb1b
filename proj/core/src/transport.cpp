#include "qsim/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

#include "qsim/errors.hpp"
#include "qsim/parallel.hpp"

namespace qsim::dist {

void Transport::count_send(const ChunkHeader& header) {
  if (header.phase == MsgPhase::ForwardExchange ||
      header.phase == MsgPhase::ReturnExchange) {
    ++stats_.amp_messages_sent;
    stats_.amps_sent += header.count;
  } else {
    ++stats_.control_messages_sent;
  }
}

void Transport::barrier() {
  const uint32_t size = world_size();
  if (size <= 1) return;
  ChunkHeader h;
  h.phase = MsgPhase::Barrier;
  h.gate_seq = control_seq_++;
  if (rank() == 0) {
    for (uint32_t r = 1; r < size; ++r) receive(r);
    for (uint32_t r = 1; r < size; ++r) send(r, h, {});
  } else {
    send(0, h, {});
    receive(0);
  }
}

void Transport::allreduce_sum(std::span<double> values) {
  const uint32_t size = world_size();
  if (size <= 1) return;

  // Doubles ride in the 16-byte amplitude slots, two per slot.
  const size_t slots = (values.size() + 1) / 2;
  std::vector<cdouble> packed(slots, cdouble{0, 0});
  std::memcpy(reinterpret_cast<double*>(packed.data()), values.data(),
              values.size() * sizeof(double));
  ChunkHeader h;
  h.phase = MsgPhase::Reduce;
  h.gate_seq = control_seq_++;
  h.count = static_cast<uint32_t>(slots);

  if (rank() == 0) {
    // Partials combine over the rank index with the same fixed-shape tree the
    // local sums use, so results do not depend on the transport.
    std::vector<std::vector<double>> parts(size);
    parts[0].assign(values.begin(), values.end());
    for (uint32_t r = 1; r < size; ++r) {
      Message msg = receive(r);
      if (msg.header.phase != MsgPhase::Reduce)
        throw transport_error("rank 0 expected a Reduce message");
      parts[r].resize(values.size());
      std::memcpy(parts[r].data(), reinterpret_cast<const double*>(msg.payload.data()),
                  values.size() * sizeof(double));
    }
    for (size_t i = 0; i < values.size(); ++i)
      values[i] = pairwise_sum<double>(0, size, [&](uint64_t r) { return parts[r][i]; });
    std::memcpy(reinterpret_cast<double*>(packed.data()), values.data(),
                values.size() * sizeof(double));
    for (uint32_t r = 1; r < size; ++r) send(r, h, packed);
  } else {
    send(0, h, packed);
    Message msg = receive(0);
    if (msg.header.phase != MsgPhase::Reduce)
      throw transport_error("expected the reduced vector from rank 0");
    std::memcpy(values.data(), reinterpret_cast<const double*>(msg.payload.data()),
                values.size() * sizeof(double));
  }
}

InProcessHub::InProcessHub(uint32_t world_size) : size_(world_size) {
  boxes_.resize(static_cast<size_t>(size_) * size_);
  for (auto& box : boxes_) box = std::make_unique<Mailbox>();
}

void InProcessHub::push(uint32_t src, uint32_t dst, Message msg) {
  Mailbox& box = *boxes_[static_cast<size_t>(src) * size_ + dst];
  {
    std::lock_guard<std::mutex> lock(box.mutex);
    box.queue.push_back(std::move(msg));
  }
  box.ready.notify_one();
}

Message InProcessHub::pop(uint32_t src, uint32_t dst) {
  Mailbox& box = *boxes_[static_cast<size_t>(src) * size_ + dst];
  std::unique_lock<std::mutex> lock(box.mutex);
  box.ready.wait(lock, [&] { return !box.queue.empty(); });
  Message msg = std::move(box.queue.front());
  box.queue.pop_front();
  return msg;
}

void InProcessTransport::send(uint32_t to_rank, const ChunkHeader& header,
                              std::span<const cdouble> payload) {
  if (to_rank >= world_size() || to_rank == rank_)
    throw transport_error("bad destination rank");
  count_send(header);
  Message msg;
  msg.header = header;
  msg.payload.assign(payload.begin(), payload.end());
  hub_.push(rank_, to_rank, std::move(msg));
}

Message InProcessTransport::receive(uint32_t from_rank) {
  if (from_rank >= world_size() || from_rank == rank_)
    throw transport_error("bad source rank");
  return hub_.pop(from_rank, rank_);
}

namespace {

constexpr char kMagic[4] = {'Q', 'S', 'V', '1'};
constexpr size_t kHeaderBytes = 24;

void write_all(int fd, const void* data, size_t len) {
  const char* p = static_cast<const char*>(data);
  while (len > 0) {
    ssize_t w = ::write(fd, p, len);
    if (w <= 0) throw transport_error("tcp write failed");
    p += w;
    len -= static_cast<size_t>(w);
  }
}

bool read_all(int fd, void* data, size_t len) {
  char* p = static_cast<char*>(data);
  while (len > 0) {
    ssize_t r = ::read(fd, p, len);
    if (r == 0) return false;  // peer closed
    if (r < 0) throw transport_error("tcp read failed");
    p += r;
    len -= static_cast<size_t>(r);
  }
  return true;
}

void put_u32(uint8_t* p, uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<uint8_t>(v >> (8 * i));
}
void put_u64(uint8_t* p, uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<uint8_t>(v >> (8 * i));
}
uint32_t get_u32(const uint8_t* p) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
  return v;
}
uint64_t get_u64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

int connect_to(const TcpEndpoint& ep) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(ep.port);
  if (getaddrinfo(ep.host.c_str(), port.c_str(), &hints, &res) != 0 || !res)
    throw transport_error("cannot resolve " + ep.host);
  int fd = -1;
  for (int attempt = 0; attempt < 200; ++attempt) {
    fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd < 0) break;
    if (::connect(fd, res->ai_addr, res->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
    // peer may not be listening yet
    ::usleep(50 * 1000);
  }
  freeaddrinfo(res);
  if (fd < 0) throw transport_error("cannot connect to " + ep.host);
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return fd;
}

}  // namespace

TcpTransport::TcpTransport(uint32_t rank, std::vector<TcpEndpoint> peers)
    : rank_(rank), peers_(std::move(peers)) {
  const uint32_t size = static_cast<uint32_t>(peers_.size());
  if (rank_ >= size) throw transport_error("rank outside the peer table");
  links_.resize(size);
  for (auto& link : links_) link = std::make_unique<Peer>();
  if (size == 1) return;

  int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) throw transport_error("cannot create listener socket");
  int one = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(peers_[rank_].port);
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
    throw transport_error("cannot bind port " + std::to_string(peers_[rank_].port));
  if (::listen(listener, static_cast<int>(size)) != 0)
    throw transport_error("listen failed");

  // Lower ranks accept, higher ranks dial; both ends exchange magic + rank.
  for (uint32_t peer = 0; peer < rank_; ++peer) {
    int fd = connect_to(peers_[peer]);
    uint8_t hello[8];
    std::memcpy(hello, kMagic, 4);
    put_u32(hello + 4, rank_);
    write_all(fd, hello, sizeof(hello));
    links_[peer]->fd = fd;
  }
  for (uint32_t expected = rank_ + 1; expected < size; ++expected) {
    int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) throw transport_error("accept failed");
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    uint8_t hello[8];
    if (!read_all(fd, hello, sizeof(hello)) || std::memcmp(hello, kMagic, 4) != 0)
      throw transport_error("bad handshake magic");
    const uint32_t peer = get_u32(hello + 4);
    if (peer <= rank_ || peer >= size || links_[peer]->fd != -1)
      throw transport_error("unexpected peer rank in handshake");
    links_[peer]->fd = fd;
  }
  ::close(listener);

  for (uint32_t peer = 0; peer < size; ++peer) {
    if (peer == rank_) continue;
    links_[peer]->reader = std::thread([this, peer] { reader_loop(peer); });
  }
}

TcpTransport::~TcpTransport() {
  for (auto& link : links_) {
    if (link && link->fd >= 0) ::shutdown(link->fd, SHUT_RDWR);
  }
  for (auto& link : links_) {
    if (link && link->reader.joinable()) link->reader.join();
    if (link && link->fd >= 0) ::close(link->fd);
  }
}

void TcpTransport::reader_loop(uint32_t peer_rank) {
  Peer& link = *links_[peer_rank];
  for (;;) {
    uint8_t raw[kHeaderBytes];
    Message msg;
    bool open = false;
    try {
      open = read_all(link.fd, raw, sizeof(raw));
      if (open) {
        msg.header.gate_seq = get_u64(raw);
        msg.header.chunk_index = get_u32(raw + 8);
        msg.header.count = get_u32(raw + 12);
        msg.header.phase = static_cast<MsgPhase>(raw[16]);
        msg.payload.resize(msg.header.count);
        if (msg.header.count > 0)
          open = read_all(link.fd, msg.payload.data(),
                          msg.header.count * sizeof(cdouble));
      }
    } catch (const transport_error&) {
      open = false;
    }
    std::lock_guard<std::mutex> lock(link.mutex);
    if (!open) {
      link.closed = true;
      link.ready.notify_all();
      return;
    }
    link.queue.push_back(std::move(msg));
    link.ready.notify_all();
  }
}

void TcpTransport::send(uint32_t to_rank, const ChunkHeader& header,
                        std::span<const cdouble> payload) {
  if (to_rank >= world_size() || to_rank == rank_)
    throw transport_error("bad destination rank");
  if (payload.size() != header.count)
    throw transport_error("payload size does not match header count");
  count_send(header);
  Peer& link = *links_[to_rank];
  uint8_t raw[kHeaderBytes] = {};
  put_u64(raw, header.gate_seq);
  put_u32(raw + 8, header.chunk_index);
  put_u32(raw + 12, header.count);
  raw[16] = static_cast<uint8_t>(header.phase);
  std::lock_guard<std::mutex> lock(link.send_mutex);
  write_all(link.fd, raw, sizeof(raw));
  if (!payload.empty())
    write_all(link.fd, payload.data(), payload.size() * sizeof(cdouble));
}

Message TcpTransport::receive(uint32_t from_rank) {
  if (from_rank >= world_size() || from_rank == rank_)
    throw transport_error("bad source rank");
  Peer& link = *links_[from_rank];
  std::unique_lock<std::mutex> lock(link.mutex);
  link.ready.wait(lock, [&] { return !link.queue.empty() || link.closed; });
  if (link.queue.empty())
    throw transport_error("connection to rank " + std::to_string(from_rank) +
                          " closed");
  Message msg = std::move(link.queue.front());
  link.queue.pop_front();
  return msg;
}

}  // namespace qsim::dist
