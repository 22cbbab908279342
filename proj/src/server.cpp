#include "tactile/server.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast.hpp>

#include "tactile/error.hpp"
#include "tactile/live.hpp"

namespace tactile::app {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

constexpr auto kPacingPeriod = std::chrono::milliseconds(2);
constexpr double kMaxLagS = 0.250;

std::string_view mime_type(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".wasm") return "application/wasm";
  return "application/octet-stream";
}

struct Inbound {
  std::uint64_t client = 0;
  std::string text;
  bool disconnect = false;
};

}  // namespace

class WsSession;

struct Server::Impl {
  Impl(session::SessionConfig cfg, ServerOptions opts)
      : options(std::move(opts)), live(std::move(cfg)), acceptor(ioc) {
    boost::system::error_code ec;
    const auto address = net::ip::make_address(options.address, ec);
    if (ec) throw std::runtime_error("bad bind address '" + options.address + "': " + ec.message());
    const tcp::endpoint endpoint{address, options.port};
    acceptor.open(endpoint.protocol());
    acceptor.set_option(net::socket_base::reuse_address(true));
    acceptor.bind(endpoint, ec);
    if (ec) {
      throw std::runtime_error("cannot bind " + options.address + ":" +
                               std::to_string(options.port) + ": " + ec.message());
    }
    acceptor.listen();
  }

  void do_accept();
  void simulation_loop();

  // Network thread only.
  void broadcast(const std::vector<std::string>& texts);
  void send_to(std::uint64_t client, const std::vector<std::string>& texts);

  void enqueue(Inbound in) {
    std::lock_guard lock(inbound_mutex);
    inbound.push_back(std::move(in));
  }

  ServerOptions options;
  std::mutex live_mutex;
  LiveSession live;

  net::io_context ioc;
  tcp::acceptor acceptor;
  std::map<std::uint64_t, std::weak_ptr<WsSession>> clients;  // network thread
  std::uint64_t next_client = 1;

  std::mutex inbound_mutex;
  std::deque<Inbound> inbound;

  std::atomic<bool> stopping{false};
  std::thread io_thread;
  std::thread sim_thread;
};

class WsSession : public std::enable_shared_from_this<WsSession> {
public:
  WsSession(tcp::socket socket, Server::Impl& server, std::uint64_t id)
      : ws_(std::move(socket)), server_(server), id_(id) {}

  void run(http::request<http::string_body> request) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->server_.clients[self->id_] = self;
      self->do_read();
    });
  }

  void send(std::string text) {
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) do_write();
  }

private:
  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->server_.clients.erase(self->id_);
        self->server_.enqueue({self->id_, {}, true});
        return;
      }
      self->server_.enqueue({self->id_, beast::buffers_to_string(self->buffer_.data()), false});
      self->buffer_.consume(self->buffer_.size());
      self->do_read();
    });
  }

  void do_write() {
    ws_.text(true);
    ws_.async_write(net::buffer(queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      if (ec) return;
                      self->queue_.pop_front();
                      if (!self->queue_.empty()) self->do_write();
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  Server::Impl& server_;
  std::uint64_t id_;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
  HttpSession(tcp::socket socket, Server::Impl& server)
      : stream_(std::move(socket)), server_(server) {}

  void run() { do_read(); }

private:
  void do_read() {
    request_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, request_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) {
                       self->on_read(ec);
                     });
  }

  void on_read(beast::error_code ec) {
    if (ec) return;
    if (websocket::is_upgrade(request_)) {
      if (request_.target() != "/ws") return reply(http::status::not_found, "text/plain", "no such endpoint\n");
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), server_, server_.next_client++)
          ->run(std::move(request_));
      return;
    }
    if (request_.method() != http::verb::get) {
      return reply(http::status::method_not_allowed, "text/plain", "GET only\n");
    }
    const std::string target{request_.target()};
    if (target == "/config") {
      std::string body;
      {
        std::lock_guard lock(server_.live_mutex);
        body = server_.live.config_json().dump(2);
      }
      return reply(http::status::ok, "application/json", std::move(body));
    }
    serve_static(target);
  }

  void serve_static(std::string target) {
    if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
    if (target.empty() || target.back() == '/') target += "index.html";
    if (target.find("..") != std::string::npos) {
      return reply(http::status::bad_request, "text/plain", "bad path\n");
    }
    const std::filesystem::path path = server_.options.static_dir / target.substr(1);
    std::ifstream in(path, std::ios::binary);
    if (!in) return reply(http::status::not_found, "text/plain", "not found\n");
    std::ostringstream body;
    body << in.rdbuf();
    reply(http::status::ok, mime_type(path), body.str());
  }

  void reply(http::status status, std::string_view type, std::string body) {
    auto res = std::make_shared<http::response<http::string_body>>(status, request_.version());
    res->set(http::field::server, "tactile");
    res->set(http::field::content_type, std::string{type});
    res->keep_alive(request_.keep_alive());
    res->body() = std::move(body);
    res->prepare_payload();
    http::async_write(stream_, *res,
                      [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
                        if (ec || !res->keep_alive()) {
                          beast::error_code ignored;
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
                          return;
                        }
                        self->do_read();
                      });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
  Server::Impl& server_;
};

void Server::Impl::do_accept() {
  acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    std::make_shared<HttpSession>(std::move(socket), *this)->run();
    do_accept();
  });
}

void Server::Impl::broadcast(const std::vector<std::string>& texts) {
  for (auto it = clients.begin(); it != clients.end();) {
    if (auto client = it->second.lock()) {
      for (const auto& t : texts) client->send(t);
      ++it;
    } else {
      it = clients.erase(it);
    }
  }
}

void Server::Impl::send_to(std::uint64_t id, const std::vector<std::string>& texts) {
  const auto it = clients.find(id);
  if (it == clients.end()) return;
  if (auto client = it->second.lock()) {
    for (const auto& t : texts) client->send(t);
  }
}

void Server::Impl::simulation_loop() {
  using clock = std::chrono::steady_clock;
  std::uint64_t controller = 0;
  bool was_running = false;
  clock::time_point ref_wall = clock::now();
  std::uint64_t ref_tick = 0;

  while (!stopping.load()) {
    std::deque<Inbound> batch;
    {
      std::lock_guard lock(inbound_mutex);
      batch.swap(inbound);
    }
    std::vector<std::string> outgoing;
    {
      std::lock_guard lock(live_mutex);
      for (const Inbound& in : batch) {
        if (in.disconnect) {
          if (in.client == controller) {
            controller = 0;
            live.pause();
          }
          continue;
        }
        if (controller == 0) controller = in.client;
        std::vector<std::string> replies;
        if (in.client != controller) {
          replies.push_back(error_message(live.time(), "not_controller",
                                          "another connection controls this session")
                                .dump());
        } else {
          for (const auto& m : live.handle_control(in.text)) replies.push_back(m.dump());
        }
        if (!replies.empty()) {
          net::post(ioc, [this, id = in.client, replies = std::move(replies)] {
            send_to(id, replies);
          });
        }
      }

      if (live.running()) {
        const double rate = static_cast<double>(live.simulator().clock().physics_rate);
        const clock::time_point now = clock::now();
        if (!was_running) {
          ref_wall = now;
          ref_tick = live.tick();
        }
        const double elapsed = std::chrono::duration<double>(now - ref_wall).count();
        const auto due = ref_tick + static_cast<std::uint64_t>(elapsed * rate);
        if (due > live.tick()) {
          const std::uint64_t behind = due - live.tick();
          if (static_cast<double>(behind) > kMaxLagS * rate) {
            // Drop the backlog instead of fast-forwarding through it.
            outgoing.push_back(error_message(live.time(), "lagging",
                                             "simulation fell behind real time; skipped " +
                                                 std::to_string(behind) + " ticks")
                                   .dump());
            ref_wall = now;
            ref_tick = live.tick();
          } else {
            for (const auto& m : live.advance(behind)) outgoing.push_back(m.dump());
          }
        }
      }
      was_running = live.running();
    }
    if (!outgoing.empty()) {
      net::post(ioc, [this, outgoing = std::move(outgoing)] { broadcast(outgoing); });
    }
    std::this_thread::sleep_for(kPacingPeriod);
  }
}

Server::Server(session::SessionConfig cfg, ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(cfg), std::move(options))) {}

Server::~Server() { stop(); }

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::start() {
  impl_->do_accept();
  impl_->sim_thread = std::thread([this] { impl_->simulation_loop(); });
  impl_->io_thread = std::thread([this] { impl_->ioc.run(); });
}

void Server::run() {
  net::signal_set signals(impl_->ioc, SIGINT, SIGTERM);
  signals.async_wait([this](beast::error_code, int) {
    impl_->stopping.store(true);
    impl_->ioc.stop();
  });
  start();
  if (impl_->io_thread.joinable()) impl_->io_thread.join();
  stop();
}

void Server::stop() {
  if (!impl_) return;
  impl_->stopping.store(true);
  impl_->ioc.stop();
  if (impl_->sim_thread.joinable() && impl_->sim_thread.get_id() != std::this_thread::get_id()) {
    impl_->sim_thread.join();
  }
  if (impl_->io_thread.joinable() && impl_->io_thread.get_id() != std::this_thread::get_id()) {
    impl_->io_thread.join();
  }
}

void parse_bind(const std::string& bind, ServerOptions& options) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos || colon + 1 == bind.size()) {
    throw ConfigError("--bind", "expected ADDR:PORT, got '" + bind + "'");
  }
  const std::string host = bind.substr(0, colon);
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(bind.substr(colon + 1), &used);
    if (used != bind.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("--bind", "port is not a number in '" + bind + "'");
  }
  if (port < 0 || port > 65535) throw ConfigError("--bind", "port out of range");
  options.address = host.empty() ? "0.0.0.0" : host;
  options.port = static_cast<unsigned short>(port);
}

}  // namespace tactile::app
