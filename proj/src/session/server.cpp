// SPDX-License-Identifier: Apache-2.0

#include "uat/session/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>
#include <optional>
#include <thread>
#include <vector>

namespace uat::session {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

// One participant connection. All members are touched on the strand only;
// service calls run on the worker pool one at a time, so the frames of a
// connection leave in the order their causes arrived.
class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket&& socket, SessionService& service, net::thread_pool& workers,
               std::chrono::milliseconds tick)
      : ws_(std::move(socket)), service_(service), workers_(workers), timer_(ws_.get_executor()), tick_(tick) {}

  void run(http::request<http::string_body> request) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request, beast::bind_front_handler(&WsConnection::on_accept, shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    do_read();
    arm_timer();
  }

  void do_read() { ws_.async_read(buffer_, beast::bind_front_handler(&WsConnection::on_read, shared_from_this())); }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      closed_ = true;
      timer_.cancel();
      return;
    }
    if (!ws_.got_text()) {
      send(to_frame(error_message(bound_, SessionErrc::ProtocolError, "binary frames are not accepted")));
    } else {
      jobs_.emplace_back(beast::buffers_to_string(buffer_.data()));
      pump();
    }
    buffer_.consume(buffer_.size());
    do_read();
  }

  void arm_timer() {
    timer_.expires_after(tick_);
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closed_) return;
      if (!self->bound_.empty() && !self->tick_queued_) {
        self->tick_queued_ = true;
        self->jobs_.emplace_back(std::nullopt);
        self->pump();
      }
      self->arm_timer();
    });
  }

  void pump() {
    if (working_ || jobs_.empty()) return;
    working_ = true;
    auto job = std::move(jobs_.front());
    jobs_.pop_front();
    net::post(workers_, [self = shared_from_this(), job = std::move(job), bound = bound_]() mutable {
      std::vector<std::string> frames;
      if (job) {
        frames = self->service_.handle_frame(bound, *job);
      } else {
        try {
          frames = self->service_.tick(bound);
        } catch (const std::exception&) {
        }
      }
      net::post(self->ws_.get_executor(), [self, frames = std::move(frames), bound = std::move(bound),
                                           was_tick = !job.has_value()] {
        self->bound_ = bound;
        if (was_tick) self->tick_queued_ = false;
        self->working_ = false;
        for (const auto& f : frames) self->send(f);
        self->pump();
      });
    });
  }

  void send(std::string frame) {
    if (closed_) return;
    outbox_.push_back(std::move(frame));
    if (!writing_) do_write();
  }

  void do_write() {
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(outbox_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      self->outbox_.pop_front();
                      if (ec) {
                        self->closed_ = true;
                        self->outbox_.clear();
                      }
                      if (self->outbox_.empty()) {
                        self->writing_ = false;
                        return;
                      }
                      self->do_write();
                    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  SessionService& service_;
  net::thread_pool& workers_;
  net::steady_timer timer_;
  std::chrono::milliseconds tick_;
  beast::flat_buffer buffer_;
  std::string bound_;
  std::deque<std::optional<std::string>> jobs_;  // nullopt is a timeout tick
  bool working_ = false;
  bool tick_queued_ = false;
  std::deque<std::string> outbox_;
  bool writing_ = false;
  bool closed_ = false;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket&& socket, SessionService& service, net::thread_pool& workers,
                 std::chrono::milliseconds tick)
      : stream_(std::move(socket)), service_(service), workers_(workers), tick_(tick) {}

  void run() {
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, request_,
                     beast::bind_front_handler(&HttpConnection::on_read, shared_from_this()));
  }

 private:
  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (websocket::is_upgrade(request_)) {
      if (request_.target() == "/ws") {
        stream_.expires_never();
        std::make_shared<WsConnection>(stream_.release_socket(), service_, workers_, tick_)->run(std::move(request_));
        return;
      }
    }
    auto response = std::make_shared<http::response<http::string_body>>();
    response->version(request_.version());
    response->keep_alive(false);
    response->set(http::field::server, "uat");
    if (request_.method() == http::verb::get && request_.target() == "/health") {
      response->result(http::status::ok);
      response->set(http::field::content_type, "application/json");
      response->body() = service_.health().dump();
    } else {
      response->result(http::status::not_found);
      response->set(http::field::content_type, "text/plain");
      response->body() = "not found\n";
    }
    response->prepare_payload();
    http::async_write(stream_, *response, [self = shared_from_this(), response](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    });
  }

  beast::tcp_stream stream_;
  SessionService& service_;
  net::thread_pool& workers_;
  std::chrono::milliseconds tick_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
};

}  // namespace

struct Server::Impl {
  Impl(SessionService& service, ServerOptions options)
      : service(service),
        options(std::move(options)),
        ioc(this->options.io_threads),
        acceptor(net::make_strand(ioc)),
        workers(static_cast<std::size_t>(this->options.worker_threads)) {}

  void accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (!ec) std::make_shared<HttpConnection>(std::move(socket), service, workers, options.tick_interval)->run();
      if (acceptor.is_open()) accept();
    });
  }

  SessionService& service;
  ServerOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor;
  net::thread_pool workers;
  std::vector<std::thread> threads;
  bool running = false;
};

Server::Server(SessionService& service, ServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
  if (impl_->options.io_threads < 1 || impl_->options.worker_threads < 1)
    throw std::invalid_argument("server needs at least one io and one worker thread");
}

Server::~Server() { stop(); }

void Server::start() {
  if (impl_->running) return;
  const tcp::endpoint endpoint(net::ip::make_address(impl_->options.address), impl_->options.port);
  impl_->acceptor.open(endpoint.protocol());
  impl_->acceptor.set_option(net::socket_base::reuse_address(true));
  impl_->acceptor.bind(endpoint);
  impl_->acceptor.listen(net::socket_base::max_listen_connections);
  impl_->accept();
  impl_->running = true;
  for (int i = 0; i < impl_->options.io_threads; ++i) impl_->threads.emplace_back([this] { impl_->ioc.run(); });
}

void Server::stop() {
  if (!impl_->running) return;
  impl_->running = false;
  net::post(impl_->acceptor.get_executor(), [this] {
    beast::error_code ignored;
    impl_->acceptor.close(ignored);
  });
  impl_->ioc.stop();
  for (auto& t : impl_->threads) t.join();
  impl_->threads.clear();
  impl_->workers.join();
}

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

}  // namespace uat::session
