#pragma once

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstdint>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "privup/bytes.hpp"
#include "privup/wire.hpp"

namespace privup {

class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace net {

class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    Socket(Socket&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
    Socket& operator=(Socket&& o) noexcept {
        if (this != &o) {
            close_fd();
            fd_ = std::exchange(o.fd_, -1);
        }
        return *this;
    }
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    ~Socket() { close_fd(); }

    int fd() const { return fd_; }
    bool valid() const { return fd_ >= 0; }
    void close_now() { close_fd(); }

private:
    void close_fd() {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }

    int fd_ = -1;
};

inline void send_all(int fd, const Bytes& data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw TransportError(std::string("send failed: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(n);
    }
}

// False on clean EOF at a message boundary; throws mid-message.
inline bool recv_exact(int fd, std::uint8_t* buf, std::size_t len) {
    std::size_t got = 0;
    while (got < len) {
        ssize_t n = ::recv(fd, buf + got, len - got, 0);
        if (n == 0) {
            if (got == 0) return false;
            throw TransportError("connection closed mid-frame");
        }
        if (n < 0) {
            if (errno == EINTR) continue;
            throw TransportError(std::string("recv failed: ") + std::strerror(errno));
        }
        got += static_cast<std::size_t>(n);
    }
    return true;
}

inline void write_frame(int fd, const Bytes& payload, std::size_t max_size = wire::kMaxFrameSize) {
    send_all(fd, wire::frame(payload, max_size));
}

// nullopt on clean EOF before a frame starts.
inline std::optional<Bytes> read_frame(int fd, std::size_t max_size = wire::kMaxFrameSize) {
    std::uint8_t head[4];
    if (!recv_exact(fd, head, 4)) return std::nullopt;
    std::uint32_t len = (std::uint32_t{head[0]} << 24) | (std::uint32_t{head[1]} << 16) |
                        (std::uint32_t{head[2]} << 8) | std::uint32_t{head[3]};
    if (len > max_size) throw TransportError("incoming frame exceeds size limit");
    Bytes payload(len);
    if (len && !recv_exact(fd, payload.data(), len)) throw TransportError("connection closed mid-frame");
    return payload;
}

inline Socket connect_tcp(const std::string& host, std::uint16_t port, int timeout_ms) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    int rc = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res);
    if (rc != 0) throw TransportError("cannot resolve " + host + ": " + gai_strerror(rc));
    Socket sock;
    std::string last_err = "no addresses";
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        Socket s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
        if (!s.valid()) {
            last_err = std::strerror(errno);
            continue;
        }
        timeval tv{timeout_ms / 1000, (timeout_ms % 1000) * 1000};
        ::setsockopt(s.fd(), SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
        ::setsockopt(s.fd(), SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
        if (::connect(s.fd(), ai->ai_addr, ai->ai_addrlen) == 0) {
            int one = 1;
            ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            sock = std::move(s);
            break;
        }
        last_err = std::strerror(errno);
    }
    ::freeaddrinfo(res);
    if (!sock.valid()) throw TransportError("cannot connect to " + host + ":" + std::to_string(port) + ": " + last_err);
    return sock;
}

// Binds and listens; returns the socket and the actual port (useful with
// port 0).
inline std::pair<Socket, std::uint16_t> listen_tcp(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), std::to_string(port).c_str(), &hints, &res);
    if (rc != 0) throw TransportError("cannot resolve bind address: " + std::string(gai_strerror(rc)));
    Socket sock;
    std::string last_err = "no addresses";
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        Socket s(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
        if (!s.valid()) {
            last_err = std::strerror(errno);
            continue;
        }
        int one = 1;
        ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        if (::bind(s.fd(), ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(s.fd(), 64) == 0) {
            sock = std::move(s);
            break;
        }
        last_err = std::strerror(errno);
    }
    ::freeaddrinfo(res);
    if (!sock.valid()) throw TransportError("cannot bind: " + last_err);

    sockaddr_storage addr{};
    socklen_t addr_len = sizeof addr;
    if (::getsockname(sock.fd(), reinterpret_cast<sockaddr*>(&addr), &addr_len) != 0)
        throw TransportError("getsockname failed");
    std::uint16_t bound = 0;
    if (addr.ss_family == AF_INET)
        bound = ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
    else if (addr.ss_family == AF_INET6)
        bound = ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
    return {std::move(sock), bound};
}

struct Endpoint {
    std::string host;
    std::uint16_t port = 0;
};

inline Endpoint parse_endpoint(const std::string& s) {
    auto colon = s.rfind(':');
    if (colon == std::string::npos || colon + 1 >= s.size())
        throw std::invalid_argument("endpoint must be host:port, got " + s);
    Endpoint e;
    e.host = s.substr(0, colon);
    unsigned long p = std::stoul(s.substr(colon + 1));
    if (p > 0xffff) throw std::invalid_argument("port out of range in " + s);
    e.port = static_cast<std::uint16_t>(p);
    return e;
}

}  // namespace net
}  // namespace privup
