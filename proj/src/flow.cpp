// SPDX-License-Identifier: Apache-2.0
#include "synopt/flow.hpp"

#include <atomic>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "synopt/error.hpp"
#include "synopt/parallel.hpp"

namespace synopt {

std::optional<std::size_t> FlowNetwork::vertex_index(
    const std::string& name) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> FlowNetwork::edge_index(
    const std::string& from, const std::string& to) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].from == from && edges[i].to == to) return i;
  return std::nullopt;
}

FlowNetwork parse_network(const std::string& text) {
  FlowNetwork net;
  std::set<std::string> seen;
  std::set<std::pair<std::string, std::string>> pairs;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;

  auto declare = [&](const std::string& name) {
    if (seen.insert(name).second) net.vertices.push_back(name);
  };

  while (std::getline(in, line)) {
    ++lineno;
    SourceSpan span{lineno, 1, 0};
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "node") {
      std::string name;
      if (!(ls >> name)) input_error("node line needs a name", span);
      declare(name);
    } else if (word == "source" || word == "sink") {
      std::string name;
      if (!(ls >> name)) input_error(word + " line needs a name", span);
      declare(name);
      (word == "source" ? net.source : net.sink) = name;
    } else if (word == "edge") {
      std::string from, to, cap;
      if (!(ls >> from >> to >> cap))
        input_error("edge line needs <from> <to> <capacity>", span);
      if (!seen.count(from)) input_error("unknown vertex " + from, span);
      if (!seen.count(to)) input_error("unknown vertex " + to, span);
      if (from == to) input_error("self-loop on " + from, span);
      if (!pairs.emplace(from, to).second)
        input_error("duplicate edge " + from + " -> " + to, span);
      Rat c = parse_rat(cap);
      if (c <= 0)
        input_error("capacity of " + from + " -> " + to +
                        " must be positive",
                    span);
      net.edges.push_back({from, to, c});
    } else {
      input_error("unknown directive '" + word + "'", span);
    }
    std::string rest;
    if (ls >> rest) input_error("trailing input '" + rest + "'", span);
  }
  if (net.source.empty()) input_error("missing source line");
  if (net.sink.empty()) input_error("missing sink line");
  if (net.source == net.sink) input_error("source equals sink");
  return net;
}

Flow parse_flow(const std::string& text, const FlowNetwork& net) {
  std::istringstream in(text);
  Flow f;
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    f.edge_flow.push_back(parse_rat(tok));
  }
  if (f.edge_flow.size() != net.edges.size())
    input_error("expected " + std::to_string(net.edges.size()) +
                " edge flows, found " + std::to_string(f.edge_flow.size()));
  return f;
}

Cut parse_cut(const std::string& text, const FlowNetwork& net) {
  Cut u(net.vertices.size(), false);
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    auto idx = net.vertex_index(tok);
    if (!idx) input_error("unknown vertex " + tok);
    u[*idx] = true;
  }
  return u;
}

std::string cut_names(const FlowNetwork& net, const Cut& u) {
  std::string out;
  for (std::size_t i = 0; i < net.vertices.size(); ++i) {
    if (i >= u.size() || !u[i]) continue;
    if (!out.empty()) out += ' ';
    out += net.vertices[i];
  }
  return out;
}

namespace {

struct Residual {
  // Arc 2i is edge i forward, arc 2i+1 its reverse.
  const FlowNetwork& net;
  Vec flow;
  std::vector<std::vector<std::size_t>> adj;  // vertex -> arc ids
  std::vector<std::size_t> from, to;

  explicit Residual(const FlowNetwork& n, Vec f)
      : net(n), flow(std::move(f)), adj(n.vertices.size()) {
    for (std::size_t i = 0; i < net.edges.size(); ++i) {
      std::size_t u = *net.vertex_index(net.edges[i].from);
      std::size_t v = *net.vertex_index(net.edges[i].to);
      from.push_back(u);
      to.push_back(v);
      adj[u].push_back(2 * i);
      adj[v].push_back(2 * i + 1);
    }
  }

  Rat residual(std::size_t arc) const {
    std::size_t e = arc / 2;
    return arc % 2 == 0 ? net.edges[e].capacity - flow[e] : flow[e];
  }
  std::size_t head(std::size_t arc) const {
    return arc % 2 == 0 ? to[arc / 2] : from[arc / 2];
  }
  std::size_t tail(std::size_t arc) const {
    return arc % 2 == 0 ? from[arc / 2] : to[arc / 2];
  }

  // Parent arcs of a breadth-first layering from the source, arcs
  // scanned in id order within each vertex.
  std::vector<std::optional<std::size_t>> bfs() const {
    std::vector<std::optional<std::size_t>> parent(net.vertices.size());
    std::vector<bool> visited(net.vertices.size(), false);
    std::size_t s = *net.vertex_index(net.source);
    visited[s] = true;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t arc : adj[v]) {
        if (residual(arc) <= 0) continue;
        std::size_t h = head(arc);
        if (visited[h]) continue;
        visited[h] = true;
        parent[h] = arc;
        queue.push_back(h);
      }
    }
    return parent;
  }
};

void check_feasible(const FlowNetwork& net, const Flow& f) {
  if (f.edge_flow.size() != net.edges.size())
    input_error("flow has " + std::to_string(f.edge_flow.size()) +
                " entries for " + std::to_string(net.edges.size()) + " edges");
  for (std::size_t i = 0; i < net.edges.size(); ++i) {
    if (f.edge_flow[i] < 0 || f.edge_flow[i] > net.edges[i].capacity)
      input_error("flow on " + net.edges[i].from + " -> " + net.edges[i].to +
                  " is out of bounds");
  }
  std::map<std::string, Rat> net_out;
  for (std::size_t i = 0; i < net.edges.size(); ++i) {
    net_out[net.edges[i].from] += f.edge_flow[i];
    net_out[net.edges[i].to] -= f.edge_flow[i];
  }
  for (const std::string& v : net.vertices) {
    if (v == net.source || v == net.sink) continue;
    auto it = net_out.find(v);
    if (it != net_out.end() && it->second != 0)
      input_error("flow is not conserved at " + v);
  }
}

}  // namespace

MaxFlowResult max_flow(const FlowNetwork& net) {
  if (net.vertices.empty()) input_error("network has no vertices");
  std::size_t t = net.vertex_index(net.sink).value();

  Residual r(net, Vec(net.edges.size(), Rat(0)));
  for (;;) {
    auto parent = r.bfs();
    if (!parent[t]) break;
    Rat bottleneck;
    bool first = true;
    for (std::size_t v = t; parent[v];) {
      std::size_t arc = *parent[v];
      Rat res = r.residual(arc);
      if (first || res < bottleneck) bottleneck = res;
      first = false;
      v = r.tail(arc);
    }
    for (std::size_t v = t; parent[v];) {
      std::size_t arc = *parent[v];
      std::size_t e = arc / 2;
      if (arc % 2 == 0)
        r.flow[e] += bottleneck;
      else
        r.flow[e] -= bottleneck;
      v = r.tail(arc);
    }
  }

  MaxFlowResult out{Flow{r.flow}, Rat(0)};
  out.value = flow_value(net, out.flow);
  return out;
}

Rat flow_value(const FlowNetwork& net, const Flow& f) {
  if (f.edge_flow.size() != net.edges.size())
    input_error("flow length does not match edge count");
  Rat value = 0;
  for (std::size_t i = 0; i < net.edges.size(); ++i) {
    if (net.edges[i].from == net.source) value += f.edge_flow[i];
    if (net.edges[i].to == net.source) value -= f.edge_flow[i];
  }
  return value;
}

Cut min_cut_from_flow(const FlowNetwork& net, const Flow& f) {
  check_feasible(net, f);
  Residual r(net, f.edge_flow);
  auto parent = r.bfs();
  std::size_t s = *net.vertex_index(net.source);
  std::size_t t = *net.vertex_index(net.sink);
  if (parent[t])
    input_error("flow is not maximal: the residual network still "
                "connects source to sink");
  Cut u(net.vertices.size(), false);
  u[s] = true;
  for (std::size_t v = 0; v < net.vertices.size(); ++v)
    if (parent[v]) u[v] = true;
  return u;
}

Rat cut_capacity(const FlowNetwork& net, const Cut& u) {
  std::size_t s = *net.vertex_index(net.source);
  std::size_t t = *net.vertex_index(net.sink);
  if (u.size() != net.vertices.size() || !u[s] || u[t])
    input_error("cut must contain the source and exclude the sink");
  Rat cap = 0;
  for (const FlowEdge& e : net.edges) {
    std::size_t from = *net.vertex_index(e.from);
    std::size_t to = *net.vertex_index(e.to);
    if (u[from] && !u[to]) cap += e.capacity;
  }
  return cap;
}

CertificateReport verify_certificate(const FlowNetwork& net, const Flow& f,
                                     const Cut& u) {
  CertificateReport rep;
  if (f.edge_flow.size() != net.edges.size() ||
      u.size() != net.vertices.size())
    input_error("certificate dimensions do not match the network");

  std::size_t s = *net.vertex_index(net.source);
  std::size_t t = *net.vertex_index(net.sink);
  rep.cut_valid = u[s] && !u[t];

  rep.bounds_ok = true;
  for (std::size_t i = 0; i < net.edges.size(); ++i)
    if (f.edge_flow[i] < 0 || f.edge_flow[i] > net.edges[i].capacity)
      rep.bounds_ok = false;

  rep.conservation_ok = true;
  std::map<std::string, Rat> net_out;
  for (std::size_t i = 0; i < net.edges.size(); ++i) {
    net_out[net.edges[i].from] += f.edge_flow[i];
    net_out[net.edges[i].to] -= f.edge_flow[i];
  }
  for (const std::string& v : net.vertices) {
    if (v == net.source || v == net.sink) continue;
    auto it = net_out.find(v);
    if (it != net_out.end() && it->second != 0) rep.conservation_ok = false;
  }

  rep.forward_saturated = true;
  rep.backward_zero = true;
  rep.capacity = 0;
  for (std::size_t i = 0; i < net.edges.size(); ++i) {
    std::size_t from = *net.vertex_index(net.edges[i].from);
    std::size_t to = *net.vertex_index(net.edges[i].to);
    bool uf = from < u.size() && u[from];
    bool ut = to < u.size() && u[to];
    if (uf && !ut) {
      rep.capacity += net.edges[i].capacity;
      if (f.edge_flow[i] != net.edges[i].capacity)
        rep.forward_saturated = false;
    }
    if (!uf && ut && f.edge_flow[i] != 0) rep.backward_zero = false;
  }

  rep.value = flow_value(net, f);
  rep.value_matches = rep.value == rep.capacity;
  rep.verdict = rep.cut_valid && rep.bounds_ok && rep.conservation_ok &&
                rep.forward_saturated && rep.backward_zero &&
                rep.value_matches;
  return rep;
}

namespace {

Cut cut_from_mask(const FlowNetwork& net, std::uint64_t mask, std::size_t s,
                  std::size_t t) {
  Cut u(net.vertices.size(), false);
  u[s] = true;
  std::size_t bit = 0;
  for (std::size_t v = 0; v < net.vertices.size(); ++v) {
    if (v == s || v == t) continue;
    if ((mask >> bit) & 1) u[v] = true;
    ++bit;
  }
  return u;
}

}  // namespace

std::optional<Cut> exists_certifying_cut(const FlowNetwork& net, const Flow& f,
                                         int jobs) {
  if (net.vertices.size() > 20)
    cap_error("cut enumeration supports at most 20 vertices");
  std::size_t s = *net.vertex_index(net.source);
  std::size_t t = *net.vertex_index(net.sink);
  std::uint64_t total = std::uint64_t{1} << (net.vertices.size() - 2);
  int workers = resolve_jobs(jobs);

  std::uint64_t found = total;
  if (workers <= 1) {
    for (std::uint64_t mask = 0; mask < total; ++mask)
      if (verify_certificate(net, f, cut_from_mask(net, mask, s, t)).verdict) {
        found = mask;
        break;
      }
  } else {
    std::atomic<std::uint64_t> best{total};
#pragma omp parallel num_threads(workers)
    {
#pragma omp for schedule(dynamic, 16)
      for (std::int64_t m = 0; m < static_cast<std::int64_t>(total); ++m) {
        std::uint64_t mask = static_cast<std::uint64_t>(m);
        if (mask >= best.load(std::memory_order_relaxed)) continue;
        if (!verify_certificate(net, f, cut_from_mask(net, mask, s, t))
                 .verdict)
          continue;
        std::uint64_t cur = best.load(std::memory_order_relaxed);
        while (mask < cur && !best.compare_exchange_weak(
                                 cur, mask, std::memory_order_relaxed))
          ;
      }
    }
    found = best.load();
  }

  if (found == total) return std::nullopt;
  return cut_from_mask(net, found, s, t);
}

std::optional<Cut> exists_certifying_cut_serial(const FlowNetwork& net,
                                                const Flow& f) {
  return exists_certifying_cut(net, f, 1);
}

}  // namespace synopt
