#include "traversim/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace traversim {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  int col = 0;
  bool consumed = false;
};

using SectionMap = std::map<std::string, std::vector<std::pair<std::string, Entry>>>;

const std::set<std::string> kSections = {"world",  "robot",   "sensors", "probe",
                                         "fusion", "planner", "run"};
const std::set<std::string> kListKeys = {"box", "ramp", "semantic", "bearing"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

SectionMap scan(std::string_view text) {
  SectionMap sections;
  std::string current;
  std::set<std::string> seen_scalar_keys;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    const std::size_t line_start = pos;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    std::string_view body = raw.substr(0, raw.find('#'));
    std::string_view t = trim(body);
    if (t.empty()) continue;

    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ParseError("unterminated section header", line_no, 1);
      }
      std::string name(trim(t.substr(1, t.size() - 2)));
      if (!kSections.count(name)) {
        throw ParseError("unknown section '" + name + "'", line_no, 1);
      }
      if (sections.count(name)) {
        throw ParseError("duplicate section '" + name + "'", line_no, 1);
      }
      sections[name];  // mark present
      current = name;
      seen_scalar_keys.clear();
      continue;
    }

    if (current.empty()) {
      throw ParseError("key outside any [section]", line_no, 1);
    }
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value'", line_no, 1);
    }
    std::string key(trim(body.substr(0, eq)));
    if (key.empty()) throw ParseError("empty key", line_no, 1);
    Entry entry;
    entry.value = std::string(trim(body.substr(eq + 1)));
    entry.line = line_no;
    entry.col = static_cast<int>(body.find_first_not_of(" \t")) + 1;
    (void)line_start;
    if (entry.value.empty()) {
      throw ParseError("empty value for '" + key + "'", line_no,
                       static_cast<int>(eq) + 2);
    }
    if (!kListKeys.count(key)) {
      const std::string qualified = current + "." + key;
      if (!seen_scalar_keys.insert(qualified).second) {
        throw ParseError("duplicate key '" + key + "'", line_no, 1);
      }
    }
    sections[current].emplace_back(key, std::move(entry));
  }
  return sections;
}

std::vector<double> parse_numbers(const std::string& field, const Entry& e,
                                  std::size_t expect) {
  std::vector<double> out;
  std::istringstream in(e.value);
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
      throw ParseError("expected a number in '" + field + "'", e.line, e.col);
    }
    out.push_back(v);
  }
  if (expect != 0 && out.size() != expect) {
    throw ParseError("'" + field + "' takes " + std::to_string(expect) +
                         " numbers, got " + std::to_string(out.size()),
                     e.line, e.col);
  }
  return out;
}

/// Typed access to one section's entries; unconsumed keys are unknown.
class Section {
 public:
  Section(SectionMap& all, const std::string& name) : name_(name) {
    auto it = all.find(name);
    if (it != all.end()) entries_ = &it->second;
  }

  double number(const std::string& key, double def) {
    const Entry* e = find(key);
    if (!e) return def;
    return parse_numbers(qualified(key), *e, 1)[0];
  }

  std::vector<double> tuple(const std::string& key, std::size_t n,
                            std::vector<double> def) {
    const Entry* e = find(key);
    if (!e) return def;
    return parse_numbers(qualified(key), *e, n);
  }

  std::vector<double> required_tuple(const std::string& key, std::size_t n) {
    const Entry* e = find(key);
    if (!e) throw ValidationError(qualified(key), "required key is missing");
    return parse_numbers(qualified(key), *e, n);
  }

  long long integer(const std::string& key, long long def) {
    const Entry* e = find(key);
    if (!e) return def;
    const double v = parse_numbers(qualified(key), *e, 1)[0];
    if (v != std::floor(v)) {
      throw ParseError("'" + qualified(key) + "' must be an integer", e->line,
                       e->col);
    }
    return static_cast<long long>(v);
  }

  bool boolean(const std::string& key, bool def) {
    const Entry* e = find(key);
    if (!e) return def;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    throw ParseError("'" + qualified(key) + "' must be true or false", e->line,
                     e->col);
  }

  std::vector<const Entry*> list(const std::string& key) {
    std::vector<const Entry*> out;
    if (!entries_) return out;
    for (auto& [k, e] : *entries_) {
      if (k == key) {
        e.consumed = true;
        out.push_back(&e);
      }
    }
    return out;
  }

  void finish() const {
    if (!entries_) return;
    for (const auto& [k, e] : *entries_) {
      if (!e.consumed) {
        throw ValidationError(qualified(k), "unknown key");
      }
    }
  }

 private:
  const Entry* find(const std::string& key) {
    if (!entries_) return nullptr;
    for (auto& [k, e] : *entries_) {
      if (k == key) {
        e.consumed = true;
        return &e;
      }
    }
    return nullptr;
  }
  std::string qualified(const std::string& key) const {
    return name_ + "." + key;
  }

  std::string name_;
  std::vector<std::pair<std::string, Entry>>* entries_ = nullptr;
};

void require(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ValidationError(field, msg);
}

Rect rect_of(const std::vector<double>& v, std::size_t at) {
  return Rect{v[at], v[at + 1], v[at + 2], v[at + 3]};
}

void check_rect(const Rect& r, const Vec2& extent, const std::string& field) {
  require(r.valid(), field, "rectangle must have positive area");
  require(r.x0 >= 0.0 && r.y0 >= 0.0 && r.x1 <= extent.x && r.y1 <= extent.y,
          field, "rectangle must lie inside the world extent");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Scenario parse_scenario_text(std::string_view text) {
  SectionMap sections = scan(text);
  Scenario s;

  {
    Section world(sections, "world");
    const auto extent = world.required_tuple("extent", 2);
    s.world.extent = {extent[0], extent[1]};
    require(s.world.extent.x > 0.0 && s.world.extent.y > 0.0, "world.extent",
            "extent must be positive");
    s.sim.resolution = world.number("resolution", 0.05);
    require(s.sim.resolution > 0.0, "world.resolution", "resolution must be > 0");
    s.world.plane_z = world.number("plane_z", 0.0);
    s.world.default_bearing = world.number("default_bearing", 500.0);
    require(s.world.default_bearing >= 0.0, "world.default_bearing",
            "bearing force must be >= 0");
    s.world.fail_force = world.number("fail_force", 100.0);
    require(s.world.fail_force > 0.0, "world.fail_force", "must be > 0");

    for (const Entry* e : world.list("box")) {
      const auto v = parse_numbers("world.box", *e, 5);
      HeightPrimitive p;
      p.kind = HeightPrimitive::Kind::box;
      p.rect = rect_of(v, 0);
      p.z0 = v[4];
      check_rect(p.rect, s.world.extent, "world.box");
      s.world.height_primitives.push_back(p);
    }
    for (const Entry* e : world.list("ramp")) {
      // ramp = x0 y0 x1 y1 axis z_low z_high
      std::istringstream in(e->value);
      std::vector<std::string> toks;
      std::string tok;
      while (in >> tok) toks.push_back(tok);
      if (toks.size() != 7) {
        throw ParseError("'world.ramp' takes x0 y0 x1 y1 axis z0 z1", e->line,
                         e->col);
      }
      HeightPrimitive p;
      p.kind = HeightPrimitive::Kind::ramp;
      double nums[6];
      int ni = 0;
      for (std::size_t t = 0; t < toks.size(); ++t) {
        if (t == 4) continue;
        char* end = nullptr;
        nums[ni] = std::strtod(toks[t].c_str(), &end);
        if (end == toks[t].c_str() || *end != '\0') {
          throw ParseError("expected a number in 'world.ramp'", e->line, e->col);
        }
        ++ni;
      }
      p.rect = Rect{nums[0], nums[1], nums[2], nums[3]};
      p.z0 = nums[4];
      p.z1 = nums[5];
      if (toks[4] != "x" && toks[4] != "y") {
        throw ParseError("'world.ramp' axis must be x or y", e->line, e->col);
      }
      p.axis = toks[4][0];
      check_rect(p.rect, s.world.extent, "world.ramp");
      s.world.height_primitives.push_back(p);
    }
    for (const Entry* e : world.list("semantic")) {
      // semantic = class x0 y0 x1 y1
      std::istringstream in(e->value);
      std::string cls;
      in >> cls;
      const auto c = class_from_string(cls);
      if (!c || *c == SemanticClass::none) {
        throw ParseError("'world.semantic' class must be plants or water",
                         e->line, e->col);
      }
      std::vector<double> v;
      double x;
      while (in >> x) v.push_back(x);
      if (v.size() != 4) {
        throw ParseError("'world.semantic' takes class x0 y0 x1 y1", e->line,
                         e->col);
      }
      SemanticRegion region{rect_of(v, 0), *c};
      check_rect(region.rect, s.world.extent, "world.semantic");
      s.world.semantic_regions.push_back(region);
    }
    for (const Entry* e : world.list("bearing")) {
      const auto v = parse_numbers("world.bearing", *e, 5);
      BearingRegion region{rect_of(v, 0), v[4]};
      require(region.force_n >= 0.0, "world.bearing", "bearing force must be >= 0");
      check_rect(region.rect, s.world.extent, "world.bearing");
      s.world.bearing_regions.push_back(region);
    }
    world.finish();
  }

  {
    Section robot(sections, "robot");
    const auto start = robot.required_tuple("start", 3);
    s.world.start_pose = {{start[0], start[1]}, start[2]};
    const auto goal = robot.required_tuple("goal", 2);
    s.world.goal = {goal[0], goal[1]};
    require(s.world.contains(s.world.start_pose.position), "robot.start",
            "start must lie inside the world extent");
    require(s.world.contains(s.world.goal), "robot.goal",
            "goal must lie inside the world extent");
    s.sim.planner.speed = robot.number("speed", 0.5);
    require(s.sim.planner.speed > 0.0, "robot.speed", "speed must be > 0");
    robot.finish();
  }

  {
    Section sensors(sections, "sensors");
    auto& d = s.sim.depth;
    d.horizontal_fov = sensors.number("depth_fov", d.horizontal_fov);
    require(d.horizontal_fov > 0.0 && d.horizontal_fov < M_PI,
            "sensors.depth_fov", "fov must be in (0, pi)");
    d.rays_per_scan = static_cast<int>(sensors.integer("depth_rays", d.rays_per_scan));
    require(d.rays_per_scan >= 1, "sensors.depth_rays", "must be >= 1");
    d.max_range = sensors.number("depth_max_range", d.max_range);
    require(d.max_range > 0.0, "sensors.depth_max_range", "must be > 0");
    d.mounted_height = sensors.number("mount_height", d.mounted_height);
    require(d.mounted_height > 0.0, "sensors.mount_height", "must be > 0");
    d.pitch_center = sensors.number("pitch_center", d.pitch_center);
    d.vertical_fov = sensors.number("vertical_fov", d.vertical_fov);
    d.vertical_rays = static_cast<int>(sensors.integer("vertical_rays", d.vertical_rays));
    require(d.vertical_rays >= 1, "sensors.vertical_rays", "must be >= 1");

    auto& vm = s.sim.variance_model;
    vm.base_var = sensors.number("variance_base", vm.base_var);
    require(vm.base_var > 0.0, "sensors.variance_base", "must be > 0");
    vm.range_coeff = sensors.number("variance_range_coeff", vm.range_coeff);
    require(vm.range_coeff >= 0.0, "sensors.variance_range_coeff", "must be >= 0");

    auto& sem = s.sim.semantic;
    sem.fov_halfangle = sensors.number("semantic_fov_halfangle", sem.fov_halfangle);
    require(sem.fov_halfangle > 0.0 && sem.fov_halfangle <= M_PI,
            "sensors.semantic_fov_halfangle", "must be in (0, pi]");
    sem.max_range = sensors.number("semantic_max_range", sem.max_range);
    require(sem.max_range > 0.0, "sensors.semantic_max_range", "must be > 0");
    sem.misclass_prob = sensors.number("misclass_prob", sem.misclass_prob);
    require(sem.misclass_prob >= 0.0 && sem.misclass_prob < 0.5,
            "sensors.misclass_prob", "must be in [0, 0.5)");
    sem.rate_divisor = static_cast<int>(sensors.integer("semantic_every", sem.rate_divisor));
    require(sem.rate_divisor >= 1, "sensors.semantic_every", "must be >= 1");
    sensors.finish();
  }

  {
    Section probe(sections, "probe");
    auto& pc = s.sim.probe;
    s.sim.probing.enabled = probe.boolean("enabled", s.sim.probing.enabled);
    pc.f_hard = probe.number("f_hard", pc.f_hard);
    require(pc.f_hard > 0.0, "probe.f_hard", "must be > 0");
    pc.f_apply_max = probe.number("f_apply_max", pc.f_apply_max);
    require(pc.f_apply_max >= pc.f_hard, "probe.f_apply_max",
            "must be >= f_hard");
    pc.window_len = static_cast<int>(probe.integer("window_len", pc.window_len));
    require(pc.window_len >= 1, "probe.window_len", "must be >= 1");
    pc.noise_std = probe.number("noise_std", pc.noise_std);
    require(pc.noise_std >= 0.0, "probe.noise_std", "must be >= 0");

    auto& pp = s.sim.probing;
    pp.reach = probe.number("reach", pp.reach);
    require(pp.reach > 0.0, "probe.reach", "must be > 0");
    pp.downsample_stride =
        static_cast<int>(probe.integer("downsample_stride", pp.downsample_stride));
    require(pp.downsample_stride >= 1, "probe.downsample_stride", "must be >= 1");
    pp.pause_ticks_min =
        static_cast<int>(probe.integer("pause_ticks", pp.pause_ticks_min));
    require(pp.pause_ticks_min >= 0, "probe.pause_ticks", "must be >= 0");
    pp.corridor_gating = probe.boolean("corridor_gating", pp.corridor_gating);
    probe.finish();
  }

  {
    Section fusion(sections, "fusion");
    auto& f = s.sim.fusion;
    f.w_roughness = fusion.number("w_roughness", f.w_roughness);
    f.w_slope = fusion.number("w_slope", f.w_slope);
    require(f.w_roughness >= 0.0 && f.w_slope >= 0.0, "fusion.w_roughness",
            "weights must be >= 0");
    require(std::abs(f.w_roughness + f.w_slope - 1.0) <= 1e-9, "fusion.w_slope",
            "weights must sum to 1");
    f.critical_roughness = fusion.number("critical_roughness", f.critical_roughness);
    require(f.critical_roughness > 0.0, "fusion.critical_roughness", "must be > 0");
    f.critical_slope = fusion.number("critical_slope", f.critical_slope);
    require(f.critical_slope > 0.0, "fusion.critical_slope", "must be > 0");
    f.t_unknown = fusion.number("t_unknown", f.t_unknown);
    require(f.t_unknown >= 0.0 && f.t_unknown <= 1.0, "fusion.t_unknown",
            "must be in [0, 1]");
    f.sigma_trav2 = fusion.number("sigma_trav2", f.sigma_trav2);
    require(f.sigma_trav2 > 0.0, "fusion.sigma_trav2", "must be > 0");
    f.sigma_sem2 = fusion.number("sigma_sem2", f.sigma_sem2);
    require(f.sigma_sem2 > 0.0, "fusion.sigma_sem2", "must be > 0");
    f.sigma_c2 = fusion.number("sigma_c2", f.sigma_c2);
    require(f.sigma_c2 > 0.0, "fusion.sigma_c2", "must be > 0");
    s.sim.local_span = fusion.number("local_span", s.sim.local_span);
    require(s.sim.local_span > 0.0, "fusion.local_span", "must be > 0");
    s.sim.plane_fit_halfwidth = static_cast<int>(
        fusion.integer("plane_fit_halfwidth", s.sim.plane_fit_halfwidth));
    require(s.sim.plane_fit_halfwidth >= 1, "fusion.plane_fit_halfwidth",
            "must be >= 1");
    fusion.finish();
  }

  {
    Section planner(sections, "planner");
    auto& p = s.sim.planner;
    p.t_block = planner.number("t_block", p.t_block);
    require(p.t_block >= 0.0 && p.t_block < 1.0, "planner.t_block",
            "must be in [0, 1)");
    p.lambda = planner.number("lambda", p.lambda);
    require(p.lambda >= 0.0, "planner.lambda", "must be >= 0");
    p.goal_tolerance = planner.number("goal_tolerance", p.goal_tolerance);
    require(p.goal_tolerance > 0.0, "planner.goal_tolerance", "must be > 0");
    p.replan_every = static_cast<int>(planner.integer("replan_every", p.replan_every));
    require(p.replan_every >= 1, "planner.replan_every", "must be >= 1");
    planner.finish();
  }

  {
    Section run(sections, "run");
    const long long seed = run.integer("seed", 0);
    require(seed >= 0, "run.seed", "must be >= 0");
    s.sim.seed = static_cast<std::uint64_t>(seed);
    s.max_ticks = run.integer("max_ticks", s.max_ticks);
    require(s.max_ticks >= 1, "run.max_ticks", "must be >= 1");
    s.snapshot_every = static_cast<int>(run.integer("snapshot_every", 0));
    require(s.snapshot_every >= 0, "run.snapshot_every", "must be >= 0");
    run.finish();
  }

  // Cross-field checks that need the finished world.
  const auto cells_x = s.world.extent.x / s.sim.resolution;
  const auto cells_y = s.world.extent.y / s.sim.resolution;
  require(cells_x >= 1.0 && cells_y >= 1.0, "world.resolution",
          "resolution larger than the world extent");

  return s;
}

Scenario parse_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw std::runtime_error("cannot open scenario file '" + file.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::string scenario_to_text(const Scenario& s) {
  std::ostringstream out;
  out << "# traversim scenario (canonical echo; all defaults applied)\n";
  out << "[world]\n";
  out << "extent = " << fmt(s.world.extent.x) << " " << fmt(s.world.extent.y) << "\n";
  out << "resolution = " << fmt(s.sim.resolution) << "\n";
  out << "plane_z = " << fmt(s.world.plane_z) << "\n";
  for (const auto& p : s.world.height_primitives) {
    if (p.kind == HeightPrimitive::Kind::box) {
      out << "box = " << fmt(p.rect.x0) << " " << fmt(p.rect.y0) << " "
          << fmt(p.rect.x1) << " " << fmt(p.rect.y1) << " " << fmt(p.z0) << "\n";
    } else {
      out << "ramp = " << fmt(p.rect.x0) << " " << fmt(p.rect.y0) << " "
          << fmt(p.rect.x1) << " " << fmt(p.rect.y1) << " " << p.axis << " "
          << fmt(p.z0) << " " << fmt(p.z1) << "\n";
    }
  }
  for (const auto& r : s.world.semantic_regions) {
    out << "semantic = " << to_string(r.cls) << " " << fmt(r.rect.x0) << " "
        << fmt(r.rect.y0) << " " << fmt(r.rect.x1) << " " << fmt(r.rect.y1)
        << "\n";
  }
  for (const auto& r : s.world.bearing_regions) {
    out << "bearing = " << fmt(r.rect.x0) << " " << fmt(r.rect.y0) << " "
        << fmt(r.rect.x1) << " " << fmt(r.rect.y1) << " " << fmt(r.force_n)
        << "\n";
  }
  out << "default_bearing = " << fmt(s.world.default_bearing) << "\n";
  out << "fail_force = " << fmt(s.world.fail_force) << "\n";

  out << "\n[robot]\n";
  out << "start = " << fmt(s.world.start_pose.position.x) << " "
      << fmt(s.world.start_pose.position.y) << " "
      << fmt(s.world.start_pose.heading) << "\n";
  out << "goal = " << fmt(s.world.goal.x) << " " << fmt(s.world.goal.y) << "\n";
  out << "speed = " << fmt(s.sim.planner.speed) << "\n";

  const auto& d = s.sim.depth;
  out << "\n[sensors]\n";
  out << "depth_fov = " << fmt(d.horizontal_fov) << "\n";
  out << "depth_rays = " << d.rays_per_scan << "\n";
  out << "depth_max_range = " << fmt(d.max_range) << "\n";
  out << "mount_height = " << fmt(d.mounted_height) << "\n";
  out << "pitch_center = " << fmt(d.pitch_center) << "\n";
  out << "vertical_fov = " << fmt(d.vertical_fov) << "\n";
  out << "vertical_rays = " << d.vertical_rays << "\n";
  out << "variance_base = " << fmt(s.sim.variance_model.base_var) << "\n";
  out << "variance_range_coeff = " << fmt(s.sim.variance_model.range_coeff) << "\n";
  out << "semantic_fov_halfangle = " << fmt(s.sim.semantic.fov_halfangle) << "\n";
  out << "semantic_max_range = " << fmt(s.sim.semantic.max_range) << "\n";
  out << "misclass_prob = " << fmt(s.sim.semantic.misclass_prob) << "\n";
  out << "semantic_every = " << s.sim.semantic.rate_divisor << "\n";

  out << "\n[probe]\n";
  out << "enabled = " << (s.sim.probing.enabled ? "true" : "false") << "\n";
  out << "f_hard = " << fmt(s.sim.probe.f_hard) << "\n";
  out << "f_apply_max = " << fmt(s.sim.probe.f_apply_max) << "\n";
  out << "window_len = " << s.sim.probe.window_len << "\n";
  out << "noise_std = " << fmt(s.sim.probe.noise_std) << "\n";
  out << "reach = " << fmt(s.sim.probing.reach) << "\n";
  out << "downsample_stride = " << s.sim.probing.downsample_stride << "\n";
  out << "pause_ticks = " << s.sim.probing.pause_ticks_min << "\n";
  out << "corridor_gating = " << (s.sim.probing.corridor_gating ? "true" : "false")
      << "\n";

  const auto& f = s.sim.fusion;
  out << "\n[fusion]\n";
  out << "w_roughness = " << fmt(f.w_roughness) << "\n";
  out << "w_slope = " << fmt(f.w_slope) << "\n";
  out << "critical_roughness = " << fmt(f.critical_roughness) << "\n";
  out << "critical_slope = " << fmt(f.critical_slope) << "\n";
  out << "t_unknown = " << fmt(f.t_unknown) << "\n";
  out << "sigma_trav2 = " << fmt(f.sigma_trav2) << "\n";
  out << "sigma_sem2 = " << fmt(f.sigma_sem2) << "\n";
  out << "sigma_c2 = " << fmt(f.sigma_c2) << "\n";
  out << "local_span = " << fmt(s.sim.local_span) << "\n";
  out << "plane_fit_halfwidth = " << s.sim.plane_fit_halfwidth << "\n";

  const auto& p = s.sim.planner;
  out << "\n[planner]\n";
  out << "t_block = " << fmt(p.t_block) << "\n";
  out << "lambda = " << fmt(p.lambda) << "\n";
  out << "goal_tolerance = " << fmt(p.goal_tolerance) << "\n";
  out << "replan_every = " << p.replan_every << "\n";

  out << "\n[run]\n";
  out << "seed = " << s.sim.seed << "\n";
  out << "max_ticks = " << s.max_ticks << "\n";
  out << "snapshot_every = " << s.snapshot_every << "\n";
  return out.str();
}

}  // namespace traversim
