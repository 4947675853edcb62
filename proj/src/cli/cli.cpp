#include "uim/cli/cli.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "uim/render/frame.hpp"
#include "uim/repo/repository.hpp"
#include "uim/repo/tabular.hpp"
#include "uim/server/config.hpp"
#include "uim/server/journal.hpp"
#include "uim/server/server.hpp"
#include "uim/shell/session.hpp"

namespace uim::cli {

namespace {

namespace fs = std::filesystem;

std::string describe(const repo::LoadError& e) {
  if (const auto& p = e.parse_error()) {
    return e.file() + ":" + std::to_string(p->line()) + ":" + std::to_string(p->column()) + ": " + e.code() +
           ": " + p->message();
  }
  if (e.kind() == repo::LoadError::Kind::Invalid) return e.report().to_text();
  std::string out = e.code();
  if (!e.file().empty()) out = e.file() + ": " + out;
  return out + ": " + e.what();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Script lines: the file's lines if `arg` names a file, otherwise the
/// argument itself with "\n" (backslash n) or real newlines as separators.
std::vector<std::string> script_lines(const std::string& arg) {
  std::string text;
  std::error_code ec;
  if (fs::is_regular_file(arg, ec)) {
    text = read_file(arg);
  } else {
    for (std::size_t i = 0; i < arg.size(); ++i) {
      if (arg[i] == '\\' && i + 1 < arg.size() && arg[i + 1] == 'n') {
        text += '\n';
        ++i;
      } else {
        text += arg[i];
      }
    }
  }
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));
  return lines;
}

int serve(const std::string& config_path, std::ostream& out, std::ostream& err) {
  std::string path = config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("UIM_CONFIG")) path = env;
  }
  if (path.empty()) {
    err << "serve: no config (use --config or UIM_CONFIG)\n";
    return 2;
  }

  // Block the shutdown signals before any thread starts so they all inherit
  // the mask and only sigwait below sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    server::Server srv(server::load_config(path));
    srv.start();
    out << "listening telnet=" << srv.telnet_port() << " admin=" << srv.admin_port() << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    spdlog::info("signal {}, shutting down", sig);
    srv.stop();
  } catch (const repo::LoadError& e) {
    err << describe(e) << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "serve: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int validate_cmd(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const auto doc = repo::load_doc(repo::Backend::from_string(path));
    const auto report = model::validate(doc);
    for (const auto& w : report.warnings) out << "warning: " << w << "\n";
    out << "OK " << doc.screens.size() << " screens, " << doc.flows.size() << " flows\n";
    return 0;
  } catch (const repo::LoadError& e) {
    err << describe(e) << "\n";
    return 1;
  }
}

int render_cmd(const std::string& path, const std::string& screen_id, std::uint16_t width, std::uint16_t height,
               bool plain, std::size_t page, std::ostream& out, std::ostream& err) {
  try {
    const model::Catalog catalog(repo::load_doc(repo::Backend::from_string(path)));
    const auto* screen = screen_id.empty() ? &catalog.root() : catalog.screen(screen_id);
    if (!screen) {
      err << "render: no screen " << screen_id << "\n";
      return 1;
    }
    render::TerminalProfile profile{width, height, render::TerminalKind::Ansi, {}};
    if (render::clamp(profile)) err << "render: size clamped to " << profile.width << "x" << profile.height << "\n";
    const model::Bindings bindings;
    render::ScreenContext ctx;
    ctx.bindings = &bindings;
    const auto result = render::layout(*screen, ctx, profile, page > 0 ? page - 1 : 0);
    for (const auto& d : result.diagnostics) err << "render: " << d << "\n";
    out << (plain ? render::to_plain(result.frame) : render::to_ansi(result.frame));
    return 0;
  } catch (const repo::LoadError& e) {
    err << describe(e) << "\n";
    return 1;
  }
}

int simulate_cmd(const std::string& path, const std::string& script, std::uint16_t width, std::uint16_t height,
                 bool frames, std::ostream& out, std::ostream& err) {
  try {
    auto snapshot = repo::make_snapshot(repo::load_doc(repo::Backend::from_string(path)), 1);
    shell::Session session("sim", snapshot, render::TerminalProfile{width, height, render::TerminalKind::Dumb, {}});
    auto emit = [&](const shell::ShellEffect& fx) {
      if (frames) out << render::to_plain(fx.frame) << "--\n";
      for (const auto& r : fx.records) out << server::to_json_line(r);
    };
    emit(session.open());
    for (const auto& line : script_lines(script)) {
      const auto fx = session.handle_line(line);
      emit(fx);
      if (fx.terminated) break;
    }
    return 0;
  } catch (const repo::LoadError& e) {
    err << describe(e) << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << "\n";
    return 1;
  }
}

int generate_cmd(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    out << repo::generate_xml(repo::read_tabular(path));
    return 0;
  } catch (const repo::GenerateError& e) {
    err << "generate: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "generate: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Telnet screen-workflow server and repository tools", "uim"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off");

  std::string config_path;
  auto* serve_cmd = app.add_subcommand("serve", "Run the Telnet server and admin API");
  serve_cmd->add_option("-c,--config", config_path, "Config file (default: $UIM_CONFIG)");

  std::string repo_path;
  auto* validate = app.add_subcommand("validate", "Load and validate a repository");
  validate->add_option("path", repo_path, "Repository directory (xml_dir:/tabular: prefix optional)")->required();

  std::string screen_id;
  std::uint16_t width = 80, height = 24;
  bool plain = false, ansi = false;
  std::size_t page = 1;
  auto* render = app.add_subcommand("render", "Render one screen to stdout");
  render->add_option("path", repo_path, "Repository directory")->required();
  render->add_option("-s,--screen", screen_id, "Screen id (default: root menu)");
  render->add_option("-W,--width", width, "Terminal width")->check(CLI::Range(1, 1000));
  render->add_option("-H,--height", height, "Terminal height")->check(CLI::Range(1, 1000));
  auto* plain_flag = render->add_flag("--plain", plain, "Dumb-terminal output");
  render->add_flag("--ansi", ansi, "VT/ANSI output (default)")->excludes(plain_flag);
  render->add_option("--page", page, "1-based page")->check(CLI::PositiveNumber);

  std::string script;
  bool frames = false;
  auto* simulate = app.add_subcommand("simulate", "Drive a session with scripted lines; print records");
  simulate->add_option("path", repo_path, "Repository directory")->required();
  simulate->add_option("--script", script, "Script file, or lines separated by \\n")->required();
  simulate->add_option("-W,--width", width, "Terminal width")->check(CLI::Range(1, 1000));
  simulate->add_option("-H,--height", height, "Terminal height")->check(CLI::Range(1, 1000));
  simulate->add_flag("--frames", frames, "Also print each frame");

  auto* generate = app.add_subcommand("generate", "Print the XML generated from tabular files");
  generate->add_option("path", repo_path, "Directory of table files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  if (!spdlog::get("uim")) spdlog::set_default_logger(spdlog::stderr_color_mt("uim"));
  spdlog::set_level(spdlog::level::from_str(log_level));

  if (*serve_cmd) return serve(config_path, out, err);
  if (*validate) return validate_cmd(repo_path, out, err);
  if (*render) return render_cmd(repo_path, screen_id, width, height, plain, page, out, err);
  if (*simulate) return simulate_cmd(repo_path, script, width, height, frames, out, err);
  if (*generate) return generate_cmd(repo_path, out, err);
  return 2;
}

}  // namespace uim::cli
