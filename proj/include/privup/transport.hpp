#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "privup/net.hpp"
#include "privup/server.hpp"
#include "privup/wire.hpp"

namespace privup {

// Request/response channel to the N databases. Implementations record every
// frame they put on (or would put on) the wire, per database, so transports
// can be compared byte for byte. A given database index must not be used
// from two threads at once; distinct databases may run concurrently.
class Transport {
public:
    virtual ~Transport() = default;

    virtual std::size_t database_count() const = 0;

    // Sends one request payload to database db (1..N), returns the response
    // payload.
    virtual Bytes roundtrip(std::size_t db, const Bytes& request) = 0;

    const std::vector<std::vector<Bytes>>& transcripts() const { return transcripts_; }

protected:
    explicit Transport(std::size_t databases) : transcripts_(databases) {}

    void record(std::size_t db, const Bytes& frame) { transcripts_[db - 1].push_back(frame); }

    void check_db(std::size_t db) const {
        if (db < 1 || db > transcripts_.size()) throw std::out_of_range("transport: database index out of range");
    }

private:
    std::vector<std::vector<Bytes>> transcripts_;
};

// Loopback transport over in-process server cores; byte-level behavior
// matches the TCP path exactly, framing included.
class InMemoryTransport : public Transport {
public:
    explicit InMemoryTransport(std::vector<ServerCore> cores)
        : Transport(cores.size()), cores_(std::move(cores)) {}

    std::size_t database_count() const override { return cores_.size(); }

    Bytes roundtrip(std::size_t db, const Bytes& request) override {
        check_db(db);
        Bytes response = cores_[db - 1].handle(request);
        record(db, wire::frame(request));
        record(db, wire::frame(response));
        return response;
    }

private:
    std::vector<ServerCore> cores_;
};

// Replicated in-memory deployment: N identical databases.
inline InMemoryTransport in_memory_transport(const SystemConfig& config, const MessageLibrary& library) {
    std::vector<ServerCore> cores;
    for (std::size_t i = 0; i < config.databases; ++i) cores.emplace_back(config, library);
    return InMemoryTransport(std::move(cores));
}

struct TcpTransportOptions {
    int timeout_ms = 10000;
    std::size_t retries = 1;  // reconnect attempts per roundtrip, same bytes resent
};

class TcpTransport : public Transport {
public:
    explicit TcpTransport(const std::vector<net::Endpoint>& endpoints, TcpTransportOptions options = {})
        : Transport(endpoints.size()), endpoints_(endpoints), options_(options), sockets_(endpoints.size()) {}

    std::size_t database_count() const override { return endpoints_.size(); }

    Bytes roundtrip(std::size_t db, const Bytes& request) override {
        check_db(db);
        std::string last_error;
        for (std::size_t attempt = 0; attempt <= options_.retries; ++attempt) {
            try {
                net::Socket& sock = sockets_[db - 1];
                if (!sock.valid())
                    sock = net::connect_tcp(endpoints_[db - 1].host, endpoints_[db - 1].port, options_.timeout_ms);
                net::write_frame(sock.fd(), request);
                auto response = net::read_frame(sock.fd());
                if (!response) throw TransportError("server closed the connection");
                record(db, wire::frame(request));
                record(db, wire::frame(*response));
                return *response;
            } catch (const TransportError& e) {
                sockets_[db - 1].close_now();
                last_error = e.what();
            }
        }
        throw TransportError("database " + std::to_string(db) + " unreachable: " + last_error);
    }

private:
    std::vector<net::Endpoint> endpoints_;
    TcpTransportOptions options_;
    std::vector<net::Socket> sockets_;
};

}  // namespace privup
