#include "topogas/live/server.hpp"

#include "topogas/errors.hpp"
#include "topogas/live/protocol.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/signal_set.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <deque>
#include <thread>
#include <variant>

namespace topogas::live {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

constexpr std::size_t kMaxQueuedFrames = 8;

class Connection : public std::enable_shared_from_this<Connection> {
public:
  Connection(tcp::socket socket, SessionManager &manager, std::chrono::milliseconds interval)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), manager_(manager), interval_(interval) {}

  ~Connection() { release(); }

  void start() {
    net::dispatch(ws_.get_executor(), [self = shared_from_this()] {
      self->ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
      self->ws_.async_accept([self](beast::error_code ec) {
        if (ec) return;
        self->ws_.text(true);
        self->read();
        self->tick();
      });
    });
  }

private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->shutdown();
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->handle(text);
      self->read();
    });
  }

  void tick() {
    timer_.expires_after(interval_);
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closing_) return;
      self->send_snapshot_if_changed();
      self->tick();
    });
  }

  void handle(const std::string &text) {
    try {
      const auto frame = protocol::decode_client_frame(text);
      if (const auto *open = std::get_if<protocol::OpenFrame>(&frame)) return on_open(*open);
      if (!session_) return send(protocol::encode_error("no open session; send an 'open' frame first"));
      if (const auto *input = std::get_if<protocol::InputFrame>(&frame)) {
        session_->handle_input(input->demonstrator, input->x, input->y, manager_.now());
      } else if (const auto *params = std::get_if<protocol::ParamsFrame>(&frame)) {
        const Params next = protocol::apply_params(session_->params(), params->changes);
        session_->set_params(next);
        send(protocol::encode_params(next));
      }
    } catch (const std::exception &e) {
      send(protocol::encode_error(e.what()));
    }
  }

  void on_open(const protocol::OpenFrame &open) {
    std::shared_ptr<Session> next;
    if (open.session) {
      next = manager_.find(*open.session);
      if (!next) return send(protocol::encode_error("unknown session '" + *open.session + "'"));
    } else {
      next = manager_.open(open.map, protocol::apply_params(Params{}, open.params));
    }
    release();
    session_ = std::move(next);
    session_->attach();
    sent_.reset();
    send(protocol::encode_open(*session_));
    send_snapshot_if_changed();
  }

  void send_snapshot_if_changed() {
    if (!session_ || outbox_.size() >= kMaxQueuedFrames) return;
    Snapshot snap = session_->snapshot();
    if (snap == sent_) return;
    sent_ = snap;
    send(protocol::encode_graph(session_->id(), *snap, session_->dropped()));
  }

  void send(std::string frame) {
    if (closing_) return;
    outbox_.push_back(std::move(frame));
    if (outbox_.size() == 1) write();
  }

  void write() {
    ws_.async_write(net::buffer(outbox_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->shutdown();
        return;
      }
      self->outbox_.pop_front();
      if (!self->outbox_.empty()) self->write();
    });
  }

  void shutdown() {
    closing_ = true;
    timer_.cancel();
    release();
  }

  // The last client to leave closes the session.
  void release() {
    if (!session_) return;
    if (session_->detach() == 0) manager_.close(session_->id());
    session_.reset();
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  net::steady_timer timer_;
  SessionManager &manager_;
  std::chrono::milliseconds interval_;
  std::shared_ptr<Session> session_;
  Snapshot sent_;
  std::deque<std::string> outbox_;
  bool closing_ = false;
};

} // namespace

struct Server::Impl {
  Impl(const ServerOptions &o, SessionManager::Clock clock)
      : options(o), manager(o.max_input_hz, std::move(clock)), acceptor(ioc) {
    if (o.snapshot_interval_ms <= 0) throw ConfigError("snapshot interval must be > 0 ms");
    if (o.threads <= 0) throw ConfigError("thread count must be > 0");
    const tcp::endpoint endpoint(net::ip::make_address(o.address), o.port);
    acceptor.open(endpoint.protocol());
    acceptor.set_option(net::socket_base::reuse_address(true));
    acceptor.bind(endpoint);
    acceptor.listen(net::socket_base::max_listen_connections);
    accept();
  }

  void accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<Connection>(std::move(socket), manager, std::chrono::milliseconds(options.snapshot_interval_ms))
          ->start();
      accept();
    });
  }

  ServerOptions options;
  // Declared before the io_context so that connections destroyed with it can still reach the manager.
  SessionManager manager;
  net::io_context ioc;
  tcp::acceptor acceptor;
};

Server::Server(const ServerOptions &options, SessionManager::Clock clock)
    : impl_(std::make_unique<Impl>(options, std::move(clock))) {}

Server::~Server() = default;

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

SessionManager &Server::sessions() { return impl_->manager; }

void Server::run(bool stop_on_signals) {
  net::signal_set signals(impl_->ioc);
  if (stop_on_signals) {
    signals.add(SIGINT);
    signals.add(SIGTERM);
    signals.async_wait([this](beast::error_code, int) { stop(); });
  }
  std::vector<std::thread> extra;
  for (int i = 1; i < impl_->options.threads; ++i) extra.emplace_back([this] { impl_->ioc.run(); });
  impl_->ioc.run();
  for (auto &t : extra) t.join();
}

void Server::stop() { impl_->ioc.stop(); }

int run_server(const ServerOptions &options, std::ostream &out) {
  Server server(options);
  out << "listening on ws://" << options.address << ':' << server.port() << std::endl;
  server.run(true);
  out << "stopped" << std::endl;
  return 0;
}

} // namespace topogas::live
