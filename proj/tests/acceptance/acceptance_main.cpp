// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <atomic>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "spiar/demo_app.hpp"
#include "spiar/http_transport.hpp"
#include "spiar/inspector.hpp"
#include "support/generators.hpp"
#include "support/harness.hpp"

using namespace spiar;
using spiar::testing::Rng;

namespace {

ComponentId id(std::uint64_t n) { return ComponentId::from_number(n); }

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void report(int n, const char* title, Verdict (*run)()) {
  auto start = std::chrono::steady_clock::now();
  Verdict v = run();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s criterion %d: %s (%s) [%.1fs]\n", v.pass ? "PASS" : "FAIL", n, title, v.detail.c_str(), secs);
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

template <typename Fn>
Verdict guarded(Fn fn) {
  Verdict v;
  try {
    fn(v);
  } catch (const std::exception& e) {
    v.fail(std::string("exception: ") + e.what());
  }
  return v;
}

class LocalServer {
 public:
  explicit LocalServer(ApplicationDefinition app, TrafficSink record = {}) {
    ServerConfig config;
    config.port = 0;
    config.app = std::move(app);
    config.asset_dir = std::filesystem::temp_directory_path();
    config.record = std::move(record);
    server_ = std::make_unique<HttpServer>(std::move(config));
    port_ = server_->start();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(30, 0);
    return c;
  }
  DeltaServerMessage bootstrap(const std::string& query = "") const {
    auto c = client();
    auto res = c.Get("/app" + query);
    if (!res || res->status != 200) throw std::runtime_error("bootstrap failed");
    auto payload = extract_bootstrap(res->body);
    if (!payload) throw std::runtime_error("no bootstrap payload");
    return decode_server(*payload);
  }
  httplib::Result post(const std::string& body) const { return client().Post("/app/delta", body, "application/json"); }
  SessionRuntime& runtime() { return server_->runtime(); }

 private:
  std::unique_ptr<HttpServer> server_;
  int port_ = 0;
};

// 1: random sessions converge after every round-trip.
Verdict convergence() {
  return guarded([](Verdict& v) {
    constexpr int kSessions = 1000;
    std::size_t round_trips = 0, events = 0, max_components = 0;
    for (std::uint64_t seed = 0; seed < kSessions && v.pass; ++seed) {
      SessionRuntime runtime(testing::random_application(seed, 100));
      auto engine = testing::open_session(runtime);
      Rng rng(testing::mix(seed, 0xacce));
      const int n_events = 1 + static_cast<int>(rng() % 50);
      for (int e = 0; e < n_events; ++e) {
        std::optional<DeltaClientMessage> msg;
        ++events;
        try {
          msg = engine.simulate_event(testing::random_user_event(rng, engine.model()));
        } catch (const EngineError& err) {
          if (err.code() != EngineError::Code::kInvalidPayload) throw;
        }
        if (!msg) continue;
        testing::loopback(runtime, engine, *msg);
        ++round_trips;
        auto server = runtime.render(engine.session());
        max_components = std::max(max_components, server.size());
        if (!engine.pending().empty()) v.fail("pending writes after a round-trip, seed " + std::to_string(seed));
        if (!(engine.model() == server)) {
          v.fail("client model differs from render_full, seed " + std::to_string(seed) + " event " + std::to_string(e));
          break;
        }
      }
    }
    if (max_components > 100) v.fail("tree grew past 100 components");
    if (v.pass) {
      v.detail = std::to_string(kSessions) + " sessions, " + std::to_string(events) + " events, " +
                 std::to_string(round_trips) + " round-trips, max " + std::to_string(max_components) +
                 " components, all exact";
    }
  });
}

// 2: codec round-trips and decoder fuzzing.
Verdict codec() {
  return guarded([](Verdict& v) {
    constexpr int kMessages = 10000;
    Rng rng(2);
    for (int i = 0; i < kMessages && v.pass; ++i) {
      auto c = testing::random_client_message(rng);
      auto cb = encode_client(c);
      auto c2 = decode_client(cb);
      if (!(c2 == c) || encode_client(c2) != cb) v.fail("client message " + std::to_string(i) + " did not round-trip");
      auto s = testing::random_server_message(rng);
      auto sb = encode_server(s);
      auto s2 = decode_server(sb);
      if (!(s2 == s) || encode_server(s2) != sb) v.fail("server message " + std::to_string(i) + " did not round-trip");
    }
    constexpr int kFuzz = 10000;
    std::size_t rejected = 0, accepted = 0;
    for (int i = 0; i < kFuzz && v.pass; ++i) {
      std::string bytes;
      if (i % 2 == 0) {
        bytes.resize(rng() % 128);
        for (auto& b : bytes) b = static_cast<char>(rng() & 0xff);
      } else {
        bytes = (i % 4 == 1) ? encode_client(testing::random_client_message(rng))
                             : encode_server(testing::random_server_message(rng));
        for (std::size_t e = 0, n = 1 + rng() % 4; e < n && !bytes.empty(); ++e) {
          std::size_t at = rng() % bytes.size();
          if (rng() % 2) {
            bytes[at] = static_cast<char>(rng() & 0xff);
          } else {
            bytes.erase(at, 1 + rng() % 8);
          }
        }
      }
      for (int which = 0; which < 2; ++which) {
        try {
          if (which == 0) {
            (void)decode_client(bytes);
          } else {
            (void)decode_server(bytes);
          }
          ++accepted;
        } catch (const CodecError&) {
          ++rejected;
        } catch (const std::exception& e) {
          v.fail(std::string("decoder threw a non-codec error: ") + e.what());
        }
      }
    }
    if (v.pass) {
      v.detail = std::to_string(2 * kMessages) + " round-trips exact; " + std::to_string(kFuzz) + " fuzz inputs, " +
                 std::to_string(rejected) + " rejected cleanly, " + std::to_string(accepted) + " accepted, no crash";
    }
  });
}

// An app with exactly 100 components; the button rewrites one label.
ApplicationDefinition hundred_component_app() {
  ApplicationDefinition app;
  app.init = [](ComponentTree& t) {
    auto panel = t.create_component("panel", {{"style", std::string("grid")}});
    t.append(t.root(), panel);
    auto button = t.create_component("button", {{"text", std::string("Refresh")}});
    t.append(panel, button);
    ComponentId target;
    for (int i = 0; i < 97; ++i) {
      auto label = t.create_component("label", {{"text", "Row " + std::to_string(i) + ": status nominal"}});
      t.append(panel, label);
      if (i == 50) target = label;
    }
    t.add_listener(button, events::kAction, [target](ComponentTree& tree, const Event&) {
      tree.set_property(target, "text", std::string("Row 50: updated"));
    });
  };
  return app;
}

// 3: delta size against the full render, measured over a recorded log.
Verdict minimality() {
  return guarded([](Verdict& v) {
    std::mutex mutex;
    std::string log;
    auto record = [&](Direction d, std::string_view p) {
      std::lock_guard lock(mutex);
      log += format_record(TrafficRecord{d, iso8601(std::chrono::system_clock::now()), std::string(p)}) + "\n";
    };
    std::size_t components = 0;
    {
      LocalServer server(hundred_component_app(), record);
      auto boot = server.bootstrap();
      RepresentationalModel model;
      model.apply_all(boot.directives);
      components = model.size();
      auto button = model.root().children[0].children[0].id;
      auto res = server.post(encode_client(DeltaClientMessage{boot.session, 1, {}, ClientAction{button, "action", {}}, {}}));
      if (!res || res->status != 200) return v.fail("POST failed");
    }
    if (components != 100) v.fail("app has " + std::to_string(components) + " components, not 100");
    std::istringstream in(log);
    auto report = compute_stats(parse_traffic_log(in));
    if (!report.errors.empty()) return v.fail(report.errors[0]);
    if (report.rows.size() != 2) return v.fail("expected 2 server messages, got " + std::to_string(report.rows.size()));
    const auto& boot = report.rows[0];
    const auto& change = report.rows[1];
    if (boot.ratio() != 1.0) v.fail("bootstrap ratio " + std::to_string(boot.ratio()));
    if (change.directives != 1) v.fail(std::to_string(change.directives) + " directives for one property change");
    if (change.ratio() > 0.10) v.fail("delta ratio " + std::to_string(change.ratio()));
    char buf[200];
    std::snprintf(buf, sizeof buf, "%zu components; bootstrap ratio %.4f; change: %zu directive, %zu/%zu bytes = %.4f",
                  components, boot.ratio(), change.directives, change.delta_bytes, change.full_bytes, change.ratio());
    if (v.pass) v.detail = buf;
  });
}

// 4: client-side validation costs no traffic.
Verdict client_side_processing() {
  return guarded([](Verdict& v) {
    SessionRuntime runtime(demo_application());
    auto engine = testing::open_session(runtime);
    std::uint64_t messages = 0;
    auto send = [&](const UserEvent& ev) {
      if (auto msg = engine.simulate_event(ev)) {
        ++messages;
        testing::loopback(runtime, engine, *msg);
      }
    };
    send({id(4), "value-change", std::string("x")});
    send({id(4), "value-change", std::string("")});
    auto style = std::get<std::string>(engine.model().find(id(4))->properties.at("style"));
    if (style != "error") v.fail("empty field not flagged locally");
    std::uint64_t validation = messages;
    if (validation != 0 || runtime.processed_count() != 0) v.fail("validation sent " + std::to_string(validation));
    send({id(5), "action", {}});
    std::uint64_t server_path = messages - validation;
    if (server_path != 1 || runtime.processed_count() != 1) v.fail("button sent " + std::to_string(server_path));
    auto status = std::get<std::string>(engine.model().find(id(6))->properties.at("text"));
    if (status != "Please enter a value.") v.fail("server listener did not answer: '" + status + "'");
    if (v.pass) {
      v.detail = "empty-field validation: " + std::to_string(validation) + " messages; server-listened click: " +
                 std::to_string(server_path) + " message";
    }
  });
}

DeltaClientMessage race_message(const std::string& session, std::int64_t seq) {
  return DeltaClientMessage{session, seq, {{id(4), "value", "m" + std::to_string(seq)}}, ClientAction{id(5), "action", {}},
                            std::nullopt};
}

// 5: concurrent requests on one session are handled one at a time, in order.
Verdict serialization() {
  return guarded([](Verdict& v) {
    constexpr int kTrials = 100;
    constexpr int kConcurrent = 8;

    SessionRuntime reference(demo_application());
    auto [ref_sid, ref_boot] = reference.create_session();
    for (int seq = 1; seq <= kConcurrent; ++seq) reference.process(ref_sid, race_message(ref_sid, seq));
    const std::string expected = encode_server(
        DeltaServerMessage{"", 0, {directive::Create{std::nullopt, 0, reference.render(ref_sid).root()}}, std::nullopt});

    LocalServer server(demo_application());
    std::size_t total_409 = 0;
    for (int trial = 0; trial < kTrials && v.pass; ++trial) {
      auto boot = server.bootstrap();
      auto processed_before = server.runtime().processed_count();
      std::vector<int> accepted(kConcurrent + 1, 0);
      std::atomic<int> conflicts{0}, unexpected{0};
      std::atomic<bool> go{false};
      std::vector<std::thread> threads;
      for (int seq = 1; seq <= kConcurrent; ++seq) {
        threads.emplace_back([&, seq] {
          auto c = server.client();
          auto body = encode_client(race_message(boot.session, seq));
          while (!go.load()) std::this_thread::yield();
          for (int attempt = 0; attempt < 10000; ++attempt) {
            auto res = c.Post("/app/delta", body, "application/json");
            if (!res) {
              ++unexpected;
              return;
            }
            if (res->status == 200) {
              if (decode_server(res->body).ack == seq) ++accepted[static_cast<std::size_t>(seq)];
              return;
            }
            if (res->status != 409) {
              ++unexpected;
              return;
            }
            ++conflicts;
            std::this_thread::sleep_for(std::chrono::microseconds(200));
          }
          ++unexpected;
        });
      }
      go = true;
      for (auto& t : threads) t.join();
      total_409 += static_cast<std::size_t>(conflicts.load());
      if (unexpected != 0) v.fail("trial " + std::to_string(trial) + ": non-200/409 responses");
      for (int seq = 1; seq <= kConcurrent; ++seq)
        if (accepted[static_cast<std::size_t>(seq)] != 1) v.fail("seq " + std::to_string(seq) + " not accepted once");
      if (server.runtime().processed_count() - processed_before != kConcurrent) v.fail("pipeline ran a seq twice");
      std::string got = encode_server(DeltaServerMessage{
          "", 0, {directive::Create{std::nullopt, 0, server.runtime().render(boot.session).root()}}, std::nullopt});
      if (got != expected) v.fail("trial " + std::to_string(trial) + " diverged from sequential replay");
      server.runtime().expire_session(boot.session);
    }
    if (v.pass) {
      v.detail = std::to_string(kTrials) + " trials x " + std::to_string(kConcurrent) +
                 " requests: each seq accepted once, " + std::to_string(total_409) +
                 " early requests answered 409, final state equals sequential replay every trial";
    }
  });
}

// 6: re-sending the last message is harmless.
Verdict idempotence() {
  return guarded([](Verdict& v) {
    int checked = 0;
    auto check_app = [&](ApplicationDefinition app, std::uint64_t seed) {
      LocalServer server(std::move(app));
      auto engine = ClientEngine::bootstrap(server.bootstrap());
      Rng rng(seed);
      for (int step = 0; step < 30 && v.pass; ++step) {
        std::optional<DeltaClientMessage> msg;
        try {
          msg = engine.simulate_event(testing::random_user_event(rng, engine.model()));
        } catch (const EngineError&) {
        }
        if (!msg) continue;
        std::string body = encode_client(*msg);
        auto first = server.post(body);
        if (!first || first->status != 200) return v.fail("POST failed");
        auto before = server.runtime().render(engine.session());
        auto processed = server.runtime().processed_count();
        auto again = server.post(body);
        if (!again || again->status != 200) return v.fail("retry rejected");
        if (again->body != first->body) v.fail("retry response differs");
        if (!(server.runtime().render(engine.session()) == before)) v.fail("retry changed the tree");
        if (server.runtime().processed_count() != processed) v.fail("retry re-ran the pipeline");
        engine.apply_server_delta(decode_server(first->body));
        ++checked;
      }
    };
    check_app(demo_application(), 6);
    for (std::uint64_t seed = 0; seed < 10 && v.pass; ++seed) check_app(testing::random_application(seed, 60), seed);
    if (v.pass) v.detail = std::to_string(checked) + " retries: byte-identical responses, trees unchanged";
  });
}

// 7: every view is reachable by URI and by navigation with the same result.
Verdict fragments() {
  return guarded([](Verdict& v) {
    int views = 0;
    auto check_app = [&](const ApplicationDefinition& app, const std::string& label) {
      SessionRuntime runtime(app);
      for (const auto& [name, proc] : app.views) {
        auto direct = testing::open_session(runtime, name);
        auto navigated = testing::open_session(runtime);
        testing::loopback(runtime, navigated, navigated.navigate(name));
        if (!(direct.model() == navigated.model()) || direct.fragment() != name || navigated.fragment() != name) {
          v.fail(label + " view '" + name + "' differs");
        }
        if (!(runtime.render(direct.session()) == runtime.render(navigated.session()))) {
          v.fail(label + " view '" + name + "' server trees differ");
        }
        ++views;
      }
    };
    check_app(demo_application(), "demo");
    for (std::uint64_t seed = 0; seed < 100 && v.pass; ++seed) {
      auto app = testing::random_application(seed, 100, 3);
      if (app.views.size() != 3) v.fail("random app without 3 views");
      check_app(app, "app " + std::to_string(seed));
    }
    if (v.pass) v.detail = std::to_string(views) + " views (demo + 100 random apps): bootstrap-with-v == navigate-v";
  });
}

// 8: HTTP adds nothing and loses nothing.
Verdict transparency() {
  return guarded([](Verdict& v) {
    LocalServer server(demo_application());
    SessionRuntime direct(demo_application());
    auto boot = server.bootstrap();
    auto [dsid, dboot] = direct.create_session();
    if (!(boot.directives == dboot.directives)) v.fail("bootstraps differ");
    auto engine = ClientEngine::bootstrap(boot);

    int exchanges = 0;
    auto exchange = [&](const DeltaClientMessage& msg) {
      auto res = server.post(encode_client(msg));
      if (!res || res->status != 200) return v.fail("exchange " + std::to_string(exchanges + 1) + " failed");
      auto over_http = decode_server(res->body);
      DeltaClientMessage local = msg;
      local.session = dsid;
      auto in_process = direct.process(dsid, local);
      if (!(over_http.directives == in_process.directives) || over_http.ack != in_process.ack ||
          over_http.fragment != in_process.fragment) {
        v.fail("exchange " + std::to_string(exchanges + 1) + " answered differently");
      }
      engine.apply_server_delta(over_http);
      ++exchanges;
    };
    auto event = [&](const UserEvent& ev) {
      if (auto msg = engine.simulate_event(ev)) exchange(*msg);
    };
    auto find_in_panel = [&](std::size_t i) { return engine.model().root().children.at(1).children.at(i).id; };

    event({id(5), "action", {}});
    for (const char* name : {"Ada", "Grace", "Edsger"}) {
      event({id(4), "value-change", std::string(name)});
      event({id(5), "action", {}});
    }
    exchange(engine.navigate("list"));
    for (const char* item : {"milk", "", "eggs", "bread", ""}) {
      event({find_in_panel(1), "value-change", std::string(item)});
      event({find_in_panel(2), "action", {}});
    }
    for (std::int64_t sel : {0, 3, -1, 1}) event({find_in_panel(0), "value-change", sel});
    exchange(engine.navigate("form"));
    event({find_in_panel(0), "value-change", std::string("Barbara")});
    event({find_in_panel(1), "action", {}});
    exchange(engine.navigate("list"));
    event({find_in_panel(2), "action", {}});
    event({find_in_panel(0), "value-change", std::int64_t{0}});
    event({find_in_panel(0), "value-change", std::int64_t{5}});

    if (exchanges != 20) v.fail(std::to_string(exchanges) + " exchanges, script expects 20");
    auto over_http = server.runtime().render(boot.session);
    if (!(over_http == direct.render(dsid))) v.fail("final trees differ");
    if (!(engine.model() == over_http)) v.fail("client model differs from server");
    if (v.pass) v.detail = std::to_string(exchanges) + " exchanges over HTTP, identical responses and final tree";
  });
}

}  // namespace

int main() {
  report(1, "convergence oracle", convergence);
  report(2, "codec round-trip and fuzz", codec);
  report(3, "delta minimality", minimality);
  report(4, "client-side processing", client_side_processing);
  report(5, "per-session serialization", serialization);
  report(6, "retry idempotence", idempotence);
  report(7, "fragment addressability", fragments);
  report(8, "transport transparency", transparency);
  std::printf("%s: %d of 8 criteria failed\n", failures == 0 ? "OK" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
