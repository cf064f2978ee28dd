#include "televiz/serve.hpp"

#include "televiz/engine.hpp"
#include "televiz/wire.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

#include <chrono>
#include <deque>
#include <functional>

namespace televiz {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using Clock = std::chrono::steady_clock;

namespace {

class Session : public std::enable_shared_from_this<Session> {
 public:
  using Handler = std::function<void(Session&, const std::string&)>;

  Session(tcp::socket socket, Handler on_message)
      : ws_(std::move(socket)), on_message_(std::move(on_message)) {}

  void start(std::string greeting) {
    greeting_ = std::move(greeting);
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.text(true);
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
  }

  void send(std::string msg) {
    if (!open_) return;
    queue_.push_back(std::move(msg));
    if (queue_.size() == 1) write_next();
  }

  void close() {
    if (!open_) return;
    open_ = false;
    queue_.clear();
    ws_.async_close(websocket::close_code::normal,
                    [self = shared_from_this()](beast::error_code) {});
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) {
      spdlog::warn("websocket handshake failed: {}", ec.message());
      return;
    }
    open_ = true;
    spdlog::info("viewer connected");
    if (!greeting_.empty()) send(std::move(greeting_));
    read_next();
  }

  void read_next() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->on_read(ec);
    });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      if (open_) spdlog::info("viewer disconnected: {}", ec.message());
      open_ = false;
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    on_message_(*this, text);
    if (open_) read_next();
  }

  void write_next() {
    ws_.async_write(net::buffer(queue_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      self->on_write(ec);
                    });
  }

  void on_write(beast::error_code ec) {
    if (ec) {
      open_ = false;
      queue_.clear();
      return;
    }
    queue_.pop_front();
    if (!queue_.empty()) write_next();
  }

  websocket::stream<beast::tcp_stream> ws_;
  Handler on_message_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  std::string greeting_;
  bool open_ = false;
};

}  // namespace

struct Server::Impl {
  Impl(ScenarioConfig c, ServeOptions o)
      : config(std::move(c)),
        options(std::move(o)),
        acceptor(ioc),
        timer(ioc),
        engine(std::make_unique<Engine>(config)) {
    if (!(options.speed > 0.0)) throw std::invalid_argument("speed must be > 0");
    if (!(options.snapshot_rate_hz > 0.0)) throw std::invalid_argument("snapshot rate must be > 0");
    const tcp::endpoint ep(net::ip::make_address(options.address), options.port);
    acceptor.open(ep.protocol());
    acceptor.set_option(net::socket_base::reuse_address(true));
    acceptor.bind(ep);
    acceptor.listen();
    snapshot_every = std::max<std::int64_t>(
        1, std::llround(config.tick_rate_hz / options.snapshot_rate_hz));
    tick_interval = std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(config.period() / options.speed));
  }

  void run() {
    accept_next();
    next_tick = Clock::now();
    schedule();
    ioc.run();
  }

  void accept_next() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      if (session) session->close();
      session = std::make_shared<Session>(
          std::move(socket), [this](Session& s, const std::string& text) { on_message(s, text); });
      session->start(engine->tick() > 0 ? snapshot_text() : std::string());
      accept_next();
    });
  }

  void schedule() {
    next_tick += tick_interval;
    const auto now = Clock::now();
    if (now - next_tick > std::chrono::milliseconds(500)) next_tick = now;  // fell behind
    timer.expires_at(next_tick);
    timer.async_wait([this](beast::error_code ec) {
      if (ec) return;
      on_tick();
      schedule();
    });
  }

  void on_tick() {
    if (engine->done()) {
      if (!options.loop) return;
      engine = std::make_unique<Engine>(config);
    }
    engine->step();
    const bool due = (engine->tick() - 1) % snapshot_every == 0;
    if (session && (due || engine->calibrated_last_step())) session->send(snapshot_text());
  }

  void on_message(Session& s, const std::string& text) {
    try {
      const Command c = wire::parse_command_text(text);
      if (engine->done() && !options.loop) {
        s.send(wire::error_message("scenario has ended").dump());
        return;
      }
      engine->enqueue(c);
      spdlog::debug("command {}", wire::command_name(c));
      s.send(wire::ack_message(c, engine->tick()).dump());
    } catch (const wire::WireError& e) {
      s.send(wire::error_message(e.what()).dump());
    }
  }

  std::string snapshot_text() const { return wire::snapshot_message(engine->snapshot()).dump(); }

  ScenarioConfig config;
  ServeOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor;
  net::steady_timer timer;
  std::unique_ptr<Engine> engine;
  std::shared_ptr<Session> session;
  std::int64_t snapshot_every = 3;
  Clock::duration tick_interval{};
  Clock::time_point next_tick;
};

Server::Server(ScenarioConfig config, ServeOptions options)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(options))) {}

Server::~Server() = default;

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() { impl_->run(); }

void Server::stop() { impl_->ioc.stop(); }

}  // namespace televiz
