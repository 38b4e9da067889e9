#include "tpsqli/target_sim.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tpsqli/errors.hpp"

namespace tpsqli {
namespace {

using nlohmann::json;

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::string strip(std::string s, std::string_view cut = " \t\r\n") {
    const auto b = s.find_first_not_of(cut);
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(cut);
    return s.substr(b, e - b + 1);
}

// Quoted literals ('...') found in text, in order.
std::vector<std::string> quoted_literals(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto open = text.find('\'', pos);
        if (open == std::string_view::npos) break;
        const auto close = text.find('\'', open + 1);
        if (close == std::string_view::npos) break;
        out.emplace_back(text.substr(open + 1, close - open - 1));
        pos = close + 1;
    }
    return out;
}

std::string drop_sql_comment(std::string s) {
    const auto dash = s.find("--");
    if (dash != std::string::npos) s.resize(dash);
    const auto hash = s.find('#');
    if (hash != std::string::npos) s.resize(hash);
    return s;
}

}  // namespace

InjectionSignal classify_injection(const std::string& value) {
    InjectionSignal signal;
    const std::string uc = upper(value);

    static const std::regex union_re(R"(UNION\s+(ALL\s+)?SELECT\b)", std::regex::icase);
    static const std::regex sleep_re(R"(SLEEP\s*\(\s*([0-9]*\.?[0-9]+)\s*\))", std::regex::icase);
    static const std::regex waitfor_re(R"(WAITFOR\s+DELAY\s+'(\d+):(\d+):([\d.]+)')",
                                       std::regex::icase);
    static const std::regex inline_re(R"(\(\s*SELECT\s+'([^']*)')", std::regex::icase);

    std::smatch m;

    // Union query: reflect the selected literals.
    if (std::regex_search(value, m, union_re)) {
        signal.technique = Technique::UnionBased;
        signal.literals = quoted_literals(value.substr(m.position(0) + m.length(0)));
        return signal;
    }

    // Stacked statement after a ';'.
    const auto semi = value.find(';');
    if (semi != std::string::npos && !strip(value.substr(semi + 1)).empty()) {
        signal.technique = Technique::StackBased;
        const std::string rest = value.substr(semi + 1);
        std::smatch wm;
        if (std::regex_search(rest, wm, waitfor_re)) {
            signal.delay_seconds = std::stod(wm[1]) * 3600.0 + std::stod(wm[2]) * 60.0 +
                                   std::stod(wm[3]);
        } else {
            signal.literals = quoted_literals(rest);
        }
        return signal;
    }

    // Time delay.
    if (std::regex_search(value, m, sleep_re)) {
        signal.technique = Technique::TimeBlind;
        signal.delay_seconds = std::stod(m[1]);
        return signal;
    }

    // Inline scalar subquery; several may occur.
    if (std::regex_search(value, m, inline_re)) {
        signal.technique = Technique::InlineQuery;
        auto it = std::sregex_iterator(value.begin(), value.end(), inline_re);
        for (; it != std::sregex_iterator(); ++it) signal.literals.push_back((*it)[1]);
        return signal;
    }

    // Boolean condition: evaluate the comparison after the last AND/OR.
    static const std::regex cond_re(R"(\b(AND|OR)\b)", std::regex::icase);
    auto last = std::sregex_iterator();
    for (auto it = std::sregex_iterator(value.begin(), value.end(), cond_re);
         it != std::sregex_iterator(); ++it) {
        last = it;
    }
    if (last != std::sregex_iterator()) {
        std::string clause = drop_sql_comment(value.substr(last->position(0) + last->length(0)));
        const auto eq = clause.find('=');
        if (eq != std::string::npos && clause.find("<>") == std::string::npos) {
            const std::string lhs = strip(strip(clause.substr(0, eq)), "'\" \t");
            const std::string rhs = strip(strip(clause.substr(eq + 1)), "'\" \t");
            if (!lhs.empty() && !rhs.empty()) {
                signal.technique = Technique::BooleanBlind;
                signal.condition_true = lhs == rhs;
                return signal;
            }
        }
    }

    // Broken syntax: unbalanced quotes.
    const auto quotes = static_cast<std::size_t>(std::count(value.begin(), value.end(), '\''));
    const auto dquotes = static_cast<std::size_t>(std::count(value.begin(), value.end(), '"'));
    if (quotes % 2 == 1 || dquotes % 2 == 1) {
        signal.technique = Technique::ErrorBased;
        return signal;
    }

    (void)uc;
    return signal;  // plain value
}

Scenario parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario: ") + e.what(), e.byte);
    }

    Scenario scenario;
    try {
        scenario.name = doc.at("name").get<std::string>();
        for (const json& jp : doc.at("pages")) {
            PageSpec page;
            page.path = jp.at("path").get<std::string>();
            if (jp.contains("links")) page.links = jp.at("links").get<std::vector<std::string>>();
            if (jp.contains("forms")) {
                for (const json& jf : jp.at("forms")) {
                    FormSpec form;
                    form.action = jf.at("action").get<std::string>();
                    form.method = method_from_name(jf.value("method", "POST"));
                    for (const json& field : jf.at("fields")) {
                        form.fields.emplace_back(field.at(0).get<std::string>(),
                                                 field.at(1).get<std::string>());
                    }
                    page.forms.push_back(std::move(form));
                }
            }
            scenario.pages.push_back(std::move(page));
        }
        for (const json& jp : doc.at("params")) {
            ParamBehavior param;
            param.path = jp.at("path").get<std::string>();
            param.method = method_from_name(jp.at("method").get<std::string>());
            param.parameter = jp.at("parameter").get<std::string>();
            for (const json& entry : jp.at("vulnerable_techniques")) {
                const std::string letter = entry.get<std::string>();
                if (letter.size() != 1) throw ValidationError("technique letters expected");
                param.vulnerable.insert(technique_from_letter(letter[0]));
            }
            param.base_latency = jp.value("base_latency", 0.0);
            if (jp.contains("per_technique_overhead")) {
                for (const auto& [letter, secs] : jp.at("per_technique_overhead").items()) {
                    if (letter.size() != 1) throw ValidationError("technique letters expected");
                    param.overhead[technique_from_letter(letter[0])] = secs.get<double>();
                }
            }
            if (jp.contains("error_signature")) {
                param.error_signature = jp.at("error_signature").get<std::string>();
            }
            if (jp.contains("reflection_behavior")) {
                param.echo_markers = jp.at("reflection_behavior").value("echo_markers", true);
            }
            scenario.params.push_back(std::move(param));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    } catch (const ValidationError& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }

    // Params must point at a served path: a page or a form action.
    for (const ParamBehavior& p : scenario.params) {
        if (p.base_latency < 0) throw ValidationError("scenario: negative base_latency");
        for (const auto& [t, secs] : p.overhead) {
            (void)t;
            if (secs < 0) throw ValidationError("scenario: negative per_technique_overhead");
        }
        bool known = false;
        for (const PageSpec& page : scenario.pages) {
            if (page.path == p.path) known = true;
            for (const FormSpec& form : page.forms) {
                if (form.action == p.path) known = true;
            }
        }
        if (!known) {
            throw ValidationError("scenario: param path '" + p.path +
                                  "' is not a page or form action");
        }
    }
    return scenario;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("scenario file '" + path + "' is not readable");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

Scenario scripted_latency(Scenario scenario, double scale) {
    if (!(scale > 0.0)) throw ValidationError("latency scale must be positive");
    for (ParamBehavior& p : scenario.params) {
        p.base_latency *= scale;
        for (auto& [t, secs] : p.overhead) {
            (void)t;
            secs *= scale;
        }
    }
    return scenario;
}

// ---------------------------------------------------------------------------
// Server
// ---------------------------------------------------------------------------

struct SimServer::Impl {
    Scenario scenario;
    double scale;
    httplib::Server server;
    std::thread listener;
    int bound_port = 0;
    std::atomic<bool> running{false};
    std::map<std::string, std::unique_ptr<std::mutex>> route_locks;

    Impl(Scenario s, double latency_scale) : scenario(std::move(s)), scale(latency_scale) {}

    static std::string route_key(const std::string& path, Method m) {
        return std::string(method_name(m)) + " " + path;
    }

    const PageSpec* find_page(const std::string& path) const {
        for (const PageSpec& p : scenario.pages) {
            if (p.path == path) return &p;
        }
        return nullptr;
    }

    std::vector<const ParamBehavior*> params_for(const std::string& path, Method m) const {
        std::vector<const ParamBehavior*> out;
        for (const ParamBehavior& p : scenario.params) {
            if (p.path == path && p.method == m) out.push_back(&p);
        }
        return out;
    }

    // Static page body; also the baseline body for every param on the page.
    std::string page_body(const std::string& path) const {
        std::ostringstream body;
        body << "<html><head><title>" << scenario.name << " " << path << "</title></head>\n";
        body << "<body>\n<h1>" << scenario.name << "</h1>\n";
        const PageSpec* page = find_page(path);
        if (page) {
            body << "<ul class=\"nav\">\n";
            for (const std::string& link : page->links) {
                body << "  <li><a href=\"" << link << "\">" << link << "</a></li>\n";
            }
            body << "</ul>\n";
            for (const FormSpec& form : page->forms) {
                body << "<form action=\"" << form.action << "\" method=\""
                     << (form.method == Method::POST ? "post" : "get") << "\">\n";
                for (const auto& [name, value] : form.fields) {
                    body << "  <input type=\"text\" name=\"" << name << "\" value=\"" << value
                         << "\">\n";
                }
                body << "  <input type=\"submit\" value=\"go\">\n</form>\n";
            }
        }
        body << "<div class=\"content\">\n<p>Catalog listing for " << path << "</p>\n"
             << "<table class=\"rows\">\n"
             << "  <tr><td>alpha</td><td>ledger</td><td>100</td></tr>\n"
             << "  <tr><td>bravo</td><td>ledger</td><td>245</td></tr>\n"
             << "  <tr><td>charlie</td><td>archive</td><td>312</td></tr>\n"
             << "  <tr><td>delta</td><td>archive</td><td>407</td></tr>\n"
             << "  <tr><td>echo</td><td>ledger</td><td>518</td></tr>\n"
             << "  <tr><td>foxtrot</td><td>archive</td><td>633</td></tr>\n"
             << "</table>\n</div>\n</body></html>\n";
        return body.str();
    }

    std::string empty_result_body(const std::string& path) const {
        std::string body = page_body(path);
        const auto from = body.find("<table class=\"rows\">");
        const auto to = body.find("</table>");
        if (from != std::string::npos && to != std::string::npos) {
            body.replace(from, to + 8 - from, "<p class=\"empty\">No matching rows found.</p>");
        }
        return body;
    }

    void handle(const std::string& path, Method method, const httplib::Request& req,
                httplib::Response& res) {
        const auto declared = params_for(path, method);

        double sleep_seconds = 0.0;
        for (const ParamBehavior* p : declared) {
            sleep_seconds = std::max(sleep_seconds, p->base_latency * scale);
        }

        std::string body = page_body(path);
        std::string echoes;
        bool emit_error = false;
        std::string error_signature;

        for (const ParamBehavior* p : declared) {
            if (!req.has_param(p->parameter)) continue;
            const InjectionSignal sig = classify_injection(req.get_param_value(p->parameter));
            if (!sig.technique || !p->vulnerable.count(*sig.technique)) continue;

            const Technique t = *sig.technique;
            const auto ovh = p->overhead.find(t);
            const double overhead = ovh == p->overhead.end() ? 0.0 : ovh->second * scale;

            switch (t) {
                case Technique::BooleanBlind:
                    // The true branch does the full row scan; the false branch
                    // short-circuits to an empty result.
                    if (sig.condition_true) {
                        sleep_seconds += overhead;
                    } else {
                        body = empty_result_body(path);
                    }
                    break;
                case Technique::ErrorBased:
                    emit_error = true;
                    error_signature = p->error_signature;
                    sleep_seconds += overhead;
                    break;
                case Technique::UnionBased:
                case Technique::InlineQuery:
                    if (p->echo_markers) {
                        for (const std::string& lit : sig.literals) echoes += lit + "\n";
                    }
                    sleep_seconds += overhead;
                    break;
                case Technique::StackBased:
                    if (sig.delay_seconds > 0.0) {
                        sleep_seconds += sig.delay_seconds;  // payload-requested, unscaled
                    } else if (p->echo_markers) {
                        for (const std::string& lit : sig.literals) echoes += lit + "\n";
                    }
                    sleep_seconds += overhead;
                    break;
                case Technique::TimeBlind:
                    sleep_seconds += sig.delay_seconds + overhead;
                    break;
            }
        }

        if (emit_error) {
            const auto pos = body.find("</body>");
            const std::string block = "<pre class=\"db-error\">" + error_signature +
                                      "; check the manual for the right syntax</pre>\n";
            body.insert(pos == std::string::npos ? body.size() : pos, block);
        }
        if (!echoes.empty()) {
            const auto pos = body.find("</body>");
            const std::string block = "<div class=\"query-result\">" + echoes + "</div>\n";
            body.insert(pos == std::string::npos ? body.size() : pos, block);
        }

        if (sleep_seconds > 0.0) {
            // Serialize latency-carrying responses per route.
            std::mutex* lock = nullptr;
            auto it = route_locks.find(route_key(path, method));
            if (it != route_locks.end()) lock = it->second.get();
            std::unique_lock<std::mutex> guard;
            if (lock) guard = std::unique_lock<std::mutex>(*lock);
            std::this_thread::sleep_for(std::chrono::duration<double>(sleep_seconds));
        }
        res.status = 200;
        res.set_content(body, "text/html");
    }

    void register_routes() {
        std::set<std::string> paths;
        for (const PageSpec& p : scenario.pages) {
            paths.insert(p.path);
            for (const FormSpec& f : p.forms) {
                if (!f.action.empty() && f.action.front() == '/') paths.insert(f.action);
            }
        }
        for (const ParamBehavior& p : scenario.params) paths.insert(p.path);

        for (const std::string& path : paths) {
            route_locks[route_key(path, Method::GET)] = std::make_unique<std::mutex>();
            route_locks[route_key(path, Method::POST)] = std::make_unique<std::mutex>();
            server.Get(path, [this, path](const httplib::Request& req, httplib::Response& res) {
                handle(path, Method::GET, req, res);
            });
            server.Post(path, [this, path](const httplib::Request& req, httplib::Response& res) {
                handle(path, Method::POST, req, res);
            });
        }
    }
};

SimServer::SimServer(Scenario scenario, double latency_scale)
    : impl_(std::make_unique<Impl>(std::move(scenario), latency_scale)) {
    if (!(latency_scale > 0.0)) throw ValidationError("latency scale must be positive");
    impl_->register_routes();
}

SimServer::~SimServer() { stop(); }

void SimServer::start(int port) {
    if (impl_->running) return;
    if (port == 0) {
        impl_->bound_port = impl_->server.bind_to_any_port("127.0.0.1");
        if (impl_->bound_port <= 0) throw FetchError("simulator: cannot bind a port");
    } else {
        if (!impl_->server.bind_to_port("127.0.0.1", port)) {
            throw FetchError("simulator: port " + std::to_string(port) + " is busy");
        }
        impl_->bound_port = port;
    }
    impl_->running = true;
    impl_->listener = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void SimServer::stop() {
    if (!impl_->running) return;
    impl_->server.stop();
    if (impl_->listener.joinable()) impl_->listener.join();
    impl_->running = false;
}

int SimServer::port() const { return impl_->bound_port; }

std::string SimServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(impl_->bound_port);
}

const Scenario& SimServer::scenario() const { return impl_->scenario; }

}  // namespace tpsqli
