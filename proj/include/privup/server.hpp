#pragma once

#include <atomic>
#include <cstdint>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "privup/net.hpp"
#include "privup/pir.hpp"
#include "privup/protocol.hpp"
#include "privup/wire.hpp"

namespace privup {

// One database: immutable prepared library plus the config digest. Knows
// nothing about its peers by construction; requests are handled statelessly.
class ServerCore {
public:
    ServerCore(SystemConfig config, const MessageLibrary& library)
        : ServerCore(std::move(config), library, nullptr) {}

    ServerCore(SystemConfig config, const MessageLibrary& library, const LinearCode* code_override)
        : config_(std::move(config)) {
        LinearCode code = code_override ? *code_override : effective_code(config_);
        if (code_override) validate_code_for(config_, code);
        prepared_ = db_prepare(config_, library, code);
        digest_ = config_digest(config_, code);
    }

    const SystemConfig& config() const { return config_; }
    const Digest& digest() const { return digest_; }
    std::size_t record_len() const { return prepared_.empty() ? 0 : prepared_[0].size(); }

    Bytes handle(const Bytes& request) const {
        try {
            wire::Request req = wire::parse_request(request);
            if (req.opcode == wire::Opcode::kHello) {
                if (req.digest != digest_) return wire::encode_error(wire::Status::kConfigMismatch);
                return wire::encode_hello_ok(digest_);
            }
            return wire::encode_query_ok(answer(req.combos, prepared_));
        } catch (const wire::WireError& e) {
            return wire::encode_error(e.status());
        } catch (const std::out_of_range&) {
            return wire::encode_error(wire::Status::kOutOfRange);
        } catch (const std::invalid_argument&) {
            return wire::encode_error(wire::Status::kMalformed);
        } catch (const std::exception&) {
            return wire::encode_error(wire::Status::kInternal);
        }
    }

private:
    SystemConfig config_;
    std::vector<BitWord> prepared_;
    Digest digest_;
};

// Thread-per-connection TCP front end over a ServerCore.
class TcpServer {
public:
    explicit TcpServer(ServerCore core) : core_(std::move(core)) {}

    TcpServer(const TcpServer&) = delete;
    TcpServer& operator=(const TcpServer&) = delete;

    ~TcpServer() { stop(); }

    // Returns the bound port (pass port 0 for an ephemeral one).
    std::uint16_t start(const std::string& host, std::uint16_t port) {
        auto [sock, bound] = net::listen_tcp(host, port);
        listener_ = std::move(sock);
        running_ = true;
        accept_thread_ = std::thread([this] { accept_loop(); });
        return bound;
    }

    // Stops accepting and joins all workers. Callers are expected to have
    // closed client connections first; a worker blocked on a live connection
    // is joined once its peer hangs up.
    void stop() {
        if (!running_.exchange(false)) return;
        ::shutdown(listener_.fd(), SHUT_RDWR);
        listener_.close_now();
        if (accept_thread_.joinable()) accept_thread_.join();
        std::lock_guard<std::mutex> lock(workers_mutex_);
        for (auto& t : workers_)
            if (t.joinable()) t.join();
        workers_.clear();
    }

    void wait() {
        if (accept_thread_.joinable()) accept_thread_.join();
    }

private:
    void accept_loop() {
        while (running_) {
            int fd = ::accept(listener_.fd(), nullptr, nullptr);
            if (fd < 0) {
                if (running_ && (errno == EINTR || errno == ECONNABORTED)) continue;
                break;
            }
            std::lock_guard<std::mutex> lock(workers_mutex_);
            workers_.emplace_back([this, fd] { serve_connection(net::Socket(fd)); });
        }
    }

    void serve_connection(net::Socket sock) {
        try {
            for (;;) {
                auto request = net::read_frame(sock.fd());
                if (!request) return;
                net::write_frame(sock.fd(), core_.handle(*request));
            }
        } catch (const std::exception& e) {
            // oversize frame or I/O failure: drop the connection
            std::cerr << "connection dropped: " << e.what() << "\n";
        }
    }

    ServerCore core_;
    net::Socket listener_;
    std::atomic<bool> running_{false};
    std::thread accept_thread_;
    std::mutex workers_mutex_;
    std::vector<std::thread> workers_;
};

}  // namespace privup
