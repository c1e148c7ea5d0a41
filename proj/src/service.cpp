#include "ubisim/service.hpp"

#include "httplib.h"
#include "ubisim/config_io.hpp"
#include "ubisim/error.hpp"

namespace ubisim {

using nlohmann::json;

namespace {

HttpReply error_reply(int status, const std::string& kind, const std::string& message) {
  return {status, json{{"error", kind}, {"message", message}}.dump()};
}

}  // namespace

HttpReply Service::handle(const std::string& method, const std::string& path, const std::string& body) const {
  try {
    if (method == "GET" && path == "/health")
      return {200, json{{"status", "ok"},
                        {"version", UBISIM_VERSION},
                        {"population_fingerprint", engine_.population().fingerprint_hex()}}
                       .dump()};
    if (method == "GET" && path == "/baseline") return {200, engine_.baseline_summary().dump()};
    if (method == "GET" && path == "/presets") {
      json presets = json::array();
      for (const auto& name : preset_names()) presets.push_back(to_json(preset(name)));
      return {200, presets.dump()};
    }
    if (method == "POST" && path == "/simulate") return simulate(body);
    if (path == "/health" || path == "/baseline" || path == "/presets" || path == "/simulate")
      return error_reply(405, "MethodNotAllowed", method + " " + path);
    return error_reply(404, "NotFound", path);
  } catch (const std::exception& e) {
    return error_reply(500, "Internal", e.what());
  }
}

// Body: a SchemeSpec, or {"scheme": SchemeSpec | preset name, "poverty_line": amount}.
HttpReply Service::simulate(const std::string& body) const {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::parse_error& e) {
    return error_reply(400, "MalformedRequest", e.what());
  }
  try {
    if (!request.is_object()) throw ConfigError("request body must be a JSON object");
    SchemeSpec spec;
    std::optional<Money> line;
    if (request.contains("scheme") && !request.contains("ubi")) {
      const json& s = request.at("scheme");
      spec = s.is_string() ? preset(s.get<std::string>()) : scheme_from_json(s);
      if (request.contains("poverty_line") && !request.at("poverty_line").is_null()) {
        const json& p = request.at("poverty_line");
        if (p.is_string()) {
          line = Money::parse(p.get<std::string>());
        } else if (p.is_number()) {
          line = round_half_up_centavos(p.get<long double>() * 100.0L);
        } else {
          throw ConfigError("invalid 'poverty_line': expected an amount");
        }
        if (*line < Money{}) throw ConfigError("invalid 'poverty_line': negative");
      }
    } else {
      spec = scheme_from_json(request);
    }
    return {200, engine_.simulate(spec, line).dump()};
  } catch (const ConfigError& e) {
    return error_reply(400, "ValidationError", e.what());
  } catch (const std::invalid_argument& e) {
    return error_reply(400, "ValidationError", e.what());
  } catch (const json::exception& e) {
    return error_reply(400, "MalformedRequest", e.what());
  } catch (const InfeasibleNeutrality& e) {
    return {422, infeasible_json(e).dump()};
  }
}

void Service::listen(const std::string& host, int port,
                     const std::function<void(int, std::function<void()>)>& on_ready) const {
  httplib::Server server;
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    const HttpReply reply = handle(req.method, req.path, req.body);
    res.status = reply.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(reply.body, "application/json");
  };
  for (const char* p : {"/health", "/baseline", "/presets", "/simulate"}) {
    server.Get(p, route);
    server.Post(p, route);
  }
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw IoFailure("cannot bind " + host + ":" + std::to_string(port));
  if (on_ready) on_ready(bound, [&server] { server.stop(); });
  server.listen_after_bind();
}

}  // namespace ubisim
