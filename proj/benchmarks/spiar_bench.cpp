// Copyright 2026 The SPIAR Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "spiar/delta_codec.hpp"
#include "spiar/session_runtime.hpp"
#include "spiar/update_manager.hpp"

using namespace spiar;

namespace {

// Root > panel > n labels, plus a button whose listener touches `touched` labels.
ApplicationDefinition flat_app(std::size_t n, std::size_t touched) {
  ApplicationDefinition app;
  app.init = [n, touched](ComponentTree& t) {
    auto panel = t.create_component("panel");
    t.append(t.root(), panel);
    auto button = t.create_component("button", {{"text", std::string("Go")}});
    t.append(panel, button);
    std::vector<ComponentId> labels;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(t.create_component("label", {{"text", "row " + std::to_string(i)}}));
      t.append(panel, labels.back());
    }
    t.add_listener(button, events::kAction, [labels, touched](ComponentTree& tree, const Event&) {
      static std::int64_t tick = 0;
      ++tick;
      for (std::size_t i = 0; i < touched && i < labels.size(); ++i)
        tree.set_property(labels[i], "text", "tick " + std::to_string(tick));
    });
  };
  return app;
}

DeltaServerMessage full_render(std::size_t n) {
  ComponentTree tree;
  flat_app(n, 0).init(tree);
  return DeltaServerMessage{std::string(32, 'a'), 0,
                            {directive::Create{std::nullopt, 0, tree.render_node(tree.root())}}, std::nullopt};
}

void BM_EncodeFullRender(benchmark::State& state) {
  auto msg = full_render(static_cast<std::size_t>(state.range(0)));
  std::size_t bytes = 0;
  for (auto _ : state) {
    auto out = encode_server(msg);
    bytes = out.size();
    benchmark::DoNotOptimize(out);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_EncodeFullRender)->Arg(10)->Arg(100)->Arg(1000);

void BM_DecodeFullRender(benchmark::State& state) {
  auto bytes = encode_server(full_render(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(decode_server(bytes));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes.size()));
}
BENCHMARK(BM_DecodeFullRender)->Arg(10)->Arg(100)->Arg(1000);

void BM_RenderFull(benchmark::State& state) {
  ComponentTree tree;
  flat_app(static_cast<std::size_t>(state.range(0)), 0).init(tree);
  for (auto _ : state) benchmark::DoNotOptimize(tree.render_full());
}
BENCHMARK(BM_RenderFull)->Arg(100)->Arg(1000);

void BM_DrainPropertyChanges(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ComponentTree tree;
  flat_app(n, 0).init(tree);
  auto ids = tree.preorder();
  DirtyLog log;
  std::int64_t tick = 0;
  for (auto _ : state) {
    RecordingScope scope(tree, log);
    ++tick;
    for (const auto& id : ids)
      if (tree.get(id).widget->type == std::string_view("label")) tree.set_property(id, "text", std::to_string(tick));
    benchmark::DoNotOptimize(log.drain(tree));
  }
}
BENCHMARK(BM_DrainPropertyChanges)->Arg(100)->Arg(1000);

void BM_ProcessRequest(benchmark::State& state) {
  SessionRuntime runtime(flat_app(100, static_cast<std::size_t>(state.range(0))));
  auto [sid, boot] = runtime.create_session();
  auto button = std::get<directive::Create>(boot.directives[0]).node.children[0].children[0].id;
  std::int64_t seq = 1;
  for (auto _ : state) {
    DeltaClientMessage msg{sid, seq++, {}, ClientAction{button, "action", {}}, std::nullopt};
    benchmark::DoNotOptimize(encode_server(runtime.process(sid, decode_client(encode_client(msg)))));
  }
}
BENCHMARK(BM_ProcessRequest)->Arg(1)->Arg(10)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
