#include "locons/cli/run.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "locons/bundle.hpp"
#include "locons/cli/config.hpp"
#include "locons/cli/report.hpp"
#include "locons/cli/verify.hpp"
#include "locons/cocycle.hpp"
#include "locons/cover.hpp"
#include "locons/dynamics.hpp"
#include "locons/errors.hpp"
#include "locons/fields.hpp"
#include "locons/forms3.hpp"

namespace locons::cli {

using nlohmann::json;

namespace {

json vec(Vec2 p) { return json::array({p.x, p.y}); }

json cycle_json(const std::vector<int>& c) { return json(c); }

// Options shared by the field/atlas based subcommands.
struct Scenario {
    std::string config, field, singular, atlas, gauges;
    CLI::Option* field_opt = nullptr;
    CLI::Option* singular_opt = nullptr;
    CLI::Option* atlas_opt = nullptr;
    CLI::Option* gauges_opt = nullptr;

    void attach(CLI::App* app, bool with_atlas) {
        app->add_option("--config", config, "JSON scenario file");
        field_opt = app->add_option("--field", field, "vortex|exact|xdy|zero or 'fx,fy'");
        singular_opt = app->add_option("--singular", singular, "singular points 'x,y;x,y'");
        if (with_atlas) {
            atlas_opt = app->add_option("--atlas", atlas, "'quadrant' or a JSON atlas file");
            gauges_opt = app->add_option("--gauges", gauges, "per-chart potential gauges 'a1,a2,...'");
        }
    }

    ScenarioConfig resolve() const {
        ScenarioConfig cfg = config.empty() ? ScenarioConfig{} : load_scenario(config);
        if (field_opt && field_opt->count()) {
            cfg.field = field_from_flag(field, singular);
        } else if (singular_opt && singular_opt->count()) {
            cfg.field.singular_points = parse_point_list(singular);
        }
        if (atlas_opt && atlas_opt->count()) {
            if (atlas == "quadrant") {
                cfg.atlas = quadrant_atlas();
            } else {
                std::ifstream in(atlas);
                if (!in) throw ValidationError("cannot open atlas file '" + atlas + "'");
                json doc;
                try {
                    doc = json::parse(in);
                } catch (const json::parse_error& e) {
                    throw ParseError(e.byte, "atlas " + atlas + ": " + e.what());
                }
                cfg.atlas = atlas_from_json(doc.contains("atlas") ? doc["atlas"] : doc);
            }
        }
        if (gauges_opt && gauges_opt->count()) cfg.gauges = parse_number_list(gauges);
        if (!cfg.gauges.empty() && cfg.gauges.size() != cfg.atlas.size())
            throw ValidationError("expected " + std::to_string(cfg.atlas.size()) + " gauges");
        cfg.sim.atlas = cfg.atlas;
        return cfg;
    }
};

void print(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

Rect parse_rect(const std::string& text) {
    auto v = parse_number_list(text);
    if (v.size() != 4) throw ValidationError("region must be x0,y0,x1,y1");
    if (!(v[0] < v[2] && v[1] < v[3])) throw ValidationError("region must satisfy x0 < x1 and y0 < y1");
    return {v[0], v[1], v[2], v[3]};
}

json closedness_json(const ClosednessReport& r, const Rect& region) {
    return {{"region", {region.x0, region.y0, region.x1, region.y1}},
            {"grid", r.grid},
            {"h", r.h},
            {"tol", r.tol},
            {"max_residual", r.max_residual},
            {"worst_point", vec(r.worst_point)},
            {"closed", r.closed}};
}

json exactness_json(const ExactnessResult& ex) {
    json offsets = json::object();
    for (auto [id, a] : ex.offsets) offsets[std::to_string(id)] = a;
    json periods = json::array();
    for (const CyclePeriod& p : ex.periods) periods.push_back({{"cycle", cycle_json(p.cycle)}, {"period", p.period}});
    return {{"exact", ex.exact}, {"offsets", offsets}, {"periods", periods}};
}

json cocycle_json(const CechCocycle& cc) {
    json entries = json::array();
    for (auto [i, j] : cc.edges()) {
        const auto& e = cc.entry(i, j);
        entries.push_back({{"i", i}, {"j", j}, {"c", e.value}, {"spread", e.spread}, {"samples", e.samples}});
    }
    json triples = json::array();
    for (const auto& t : cc.triples())
        triples.push_back({{"charts", {t.i, t.j, t.k}}, {"residual", t.residual}});
    return {{"entries", entries}, {"triples", triples}, {"identities_hold", cc.identities_hold()}};
}

PotentialSet potentials_for(const ScenarioConfig& cfg) {
    return build_potentials(cfg.field, cfg.atlas, cfg.gauges);
}

struct SimFlags {
    double m = 0, h = 0, T = 0, r_min = 0;
    std::string q0, p0, integrator;
    int log_every = 1;
    std::string out, svg;
    bool csv = false;
    CLI::Option *m_opt, *h_opt, *T_opt, *r_opt, *q0_opt, *p0_opt, *int_opt, *log_opt, *out_opt, *svg_opt;

    void attach(CLI::App* app) {
        m_opt = app->add_option("--m", m, "mass");
        q0_opt = app->add_option("--q0", q0, "initial position x,y");
        p0_opt = app->add_option("--p0", p0, "initial momentum px,py");
        h_opt = app->add_option("--h", h, "step size");
        T_opt = app->add_option("--T", T, "duration");
        r_opt = app->add_option("--r-min", r_min, "abort radius around singular points");
        int_opt = app->add_option("--integrator", integrator, "leapfrog|rk4-reference");
        log_opt = app->add_option("--log-every", log_every, "log every n-th step");
        out_opt = app->add_option("--out", out, "trajectory CSV file");
        svg_opt = app->add_option("--emit-svg", svg, "SVG plot file");
        app->add_flag("--csv", csv, "write the trajectory CSV to stdout instead of the JSON report");
    }

    void apply(ScenarioConfig& cfg) const {
        if (m_opt->count()) cfg.sim.mass = m;
        if (q0_opt->count()) cfg.sim.q0 = parse_point(q0);
        if (p0_opt->count()) cfg.sim.p0 = parse_point(p0);
        if (h_opt->count()) cfg.sim.h = h;
        if (T_opt->count()) cfg.sim.T = T;
        if (r_opt->count()) cfg.sim.r_min = r_min;
        if (int_opt->count()) cfg.sim.integrator = parse_integrator(integrator);
        if (log_opt->count()) cfg.sim.log_every = log_every;
        if (out_opt->count()) cfg.out = out;
        if (svg_opt->count()) cfg.svg = svg;
    }
};

std::string sidecar_path(const std::string& csv_path) {
    std::string base = csv_path;
    auto slash = base.find_last_of('/');
    auto dot = base.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) base.erase(dot);
    return base + ".transitions.json";
}

int simulate_command(const ScenarioConfig& cfg, bool csv, std::ostream& out, std::ostream& err) {
    PotentialSet ps = potentials_for(cfg);
    Trajectory tr = simulate(cfg.sim, ps);

    std::ostringstream csv_text;
    write_trajectory_csv(csv_text, tr);
    if (!cfg.out.empty()) {
        write_file(cfg.out, csv_text.str());
        write_file(sidecar_path(cfg.out), transitions_json(tr).dump(2) + "\n");
    }
    if (!cfg.svg.empty()) {
        std::ostringstream svg;
        write_svg(svg, tr, cfg.field.singular_points);
        write_file(cfg.svg, svg.str());
    }

    json report = {{"status", to_string(tr.status)},
                   {"message", tr.message},
                   {"integrator", to_string(cfg.sim.integrator)},
                   {"h", cfg.sim.h},
                   {"T", cfg.sim.T},
                   {"samples", tr.states.size()},
                   {"transitions", transitions_json(tr)["transitions"]}};
    if (!tr.states.empty()) {
        const SimState& s = tr.states.back();
        report["final"] = {{"t", s.t},       {"q", vec(s.q)},       {"p", vec(s.p)},
                           {"chart", s.chart}, {"theta_acc", s.theta_acc}, {"E_local", s.E_local}};
        CechCocycle cc = cocycle(ps, cfg.atlas);
        EnergyLedger led = energy_ledger(tr, ps, cc);
        json ledger = {{"segments", led.segments.size()},
                       {"max_segment_drift", led.max_segment_drift},
                       {"max_transition_residual", led.max_transition_residual}};
        if (led.loop)
            ledger["loop"] = {{"closure_gap", led.loop->closure_gap},
                              {"windings", led.loop->windings},
                              {"delta_kinetic", led.loop->delta_kinetic},
                              {"expected", led.loop->expected},
                              {"residual", led.loop->residual}};
        report["ledger"] = ledger;
        report["cover_energy_drift"] = cover_energy(tr, lift_trajectory(tr), cfg.sim.mass).max_drift;
    }
    if (csv) {
        out << csv_text.str();
    } else {
        print(out, report);
    }

    switch (tr.status) {
        case SimStatus::Completed: return kOk;
        case SimStatus::LeftAtlas: err << "simulate: " << tr.message << '\n'; return kValidation;
        default: err << "simulate: aborted (" << to_string(tr.status) << "): " << tr.message << '\n'; return kNumeric;
    }
}

int lift_command(const std::string& traj, const std::string& out_path, const std::string& center_text,
                 long sheet0, std::ostream& out) {
    std::ifstream in(traj);
    if (!in) throw ValidationError("cannot open trajectory '" + traj + "'");
    CsvTable t = read_csv(in);
    const std::size_t ct = t.column("t"), cx = t.column("x"), cy = t.column("y"), cth = t.column("theta_acc");
    Vec2 center = center_text.empty() ? Vec2{} : parse_point(center_text);
    std::vector<LiftState> lift;
    for (const auto& row : t.rows)
        lift.push_back(lift_point(row[ct], {row[cx], row[cy]}, row[cth] + kTwoPi * static_cast<double>(sheet0), center));
    std::ostringstream csv;
    write_lift_csv(csv, lift);
    if (out_path.empty()) {
        out << csv.str();
        return kOk;
    }
    write_file(out_path, csv.str());
    json report = {{"samples", lift.size()}, {"out", out_path}};
    if (!lift.empty()) {
        report["sheet_initial"] = sheet_of(lift.front());
        report["sheet_final"] = sheet_of(lift.back());
        report["v_initial"] = lift.front().v;
        report["v_final"] = lift.back().v;
    }
    print(out, report);
    return kOk;
}

json germ_json(const LogGerm& g) {
    auto v = g.value();
    return {{"anchor", {g.anchor.real(), g.anchor.imag()}}, {"sheet", g.sheet}, {"value", {{"re", v.real()}, {"im", v.imag()}}}};
}

int dispatch(CLI::App& app, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for every subcommand");

    // forms-table
    int samples = 100;
    unsigned seed = 7;
    double fd_step = forms::kDefaultStep;
    auto* forms_cmd = app.add_subcommand("forms-table", "Hodge star table and identity residuals");
    forms_cmd->add_option("--samples", samples, "random constant vectors / points");
    forms_cmd->add_option("--seed", seed, "RNG seed");
    forms_cmd->add_option("--step", fd_step, "finite-difference step");

    // check-closed
    Scenario closed_sc;
    std::string region = "0.5,0.5,2,2";
    int grid = 20;
    double h_fd = 1e-5, tol = 1e-5;
    auto* closed_cmd = app.add_subcommand("check-closed", "finite-difference curl residual on a grid");
    closed_sc.attach(closed_cmd, false);
    closed_cmd->add_option("--region", region, "x0,y0,x1,y1");
    closed_cmd->add_option("--grid", grid, "grid points per side");
    closed_cmd->add_option("--step", h_fd, "finite-difference step");
    closed_cmd->add_option("--tol", tol, "closedness tolerance");

    // work
    Scenario work_sc;
    std::string path_spec, quad_spec = "simpson";
    int segments = 2000;
    auto* work_cmd = app.add_subcommand("work", "line integral of the field along a path");
    work_sc.attach(work_cmd, false);
    work_cmd->add_option("--path", path_spec, "circle:cx,cy,r,turns[,N] | poly:x,y;... | param:x(t),y(t),t0,t1,N")
        ->required();
    work_cmd->add_option("--quad", quad_spec, "trapezoid | simpson | gauss(n)");
    work_cmd->add_option("--segments", segments, "polyline panels");

    // winding
    std::string winding_path, about = "0,0";
    auto* winding_cmd = app.add_subcommand("winding", "winding number of a closed path");
    winding_cmd->add_option("--path", winding_path, "path spec")->required();
    winding_cmd->add_option("--about", about, "center x,y");

    // potentials
    Scenario pot_sc;
    std::vector<std::string> evals;
    auto* pot_cmd = app.add_subcommand("potentials", "evaluate local potentials");
    pot_sc.attach(pot_cmd, true);
    pot_cmd->add_option("--eval", evals, "x,y@chart (chart optional)");

    // cocycle
    Scenario coc_sc;
    int overlap_samples = 32;
    double coc_tol = kCocycleTolerance;
    auto* coc_cmd = app.add_subcommand("cocycle", "Cech cocycle of the local potentials");
    coc_sc.attach(coc_cmd, true);
    coc_cmd->add_option("--samples", overlap_samples, "samples per overlap");
    coc_cmd->add_option("--tol", coc_tol, "constancy tolerance");

    // classify
    Scenario cls_sc;
    std::vector<std::string> regions;
    int cls_grid = 20;
    double cls_h = 1e-5, cls_tol = 1e-5;
    auto* cls_cmd = app.add_subcommand("classify", "exact / closed-not-exact / not-closed");
    cls_sc.attach(cls_cmd, true);
    cls_cmd->add_option("--region", regions, "probe region x0,y0,x1,y1 (repeatable)");
    cls_cmd->add_option("--grid", cls_grid, "grid points per side");
    cls_cmd->add_option("--step", cls_h, "finite-difference step");
    cls_cmd->add_option("--tol", cls_tol, "closedness tolerance");

    // bundle
    Scenario bun_sc;
    std::vector<std::string> cycles;
    auto* bun_cmd = app.add_subcommand("bundle", "transition functions, holonomy and triviality");
    bun_sc.attach(bun_cmd, true);
    bun_cmd->add_option("--cycle", cycles, "closed chart sequence, e.g. 1,2,3,4,1 (repeatable)");

    // simulate
    Scenario sim_sc;
    SimFlags sim_flags;
    auto* sim_cmd = app.add_subcommand("simulate", "chart-aware leapfrog simulation");
    sim_cmd->set_help_flag("--help", "Print this help message and exit");  // frees -h for the step size
    sim_sc.attach(sim_cmd, true);
    sim_flags.attach(sim_cmd);

    // lift
    std::string traj, lift_out, center;
    long sheet0 = 0;
    auto* lift_cmd = app.add_subcommand("lift", "lift a trajectory CSV to the universal cover");
    lift_cmd->add_option("--traj", traj, "trajectory CSV from simulate")->required();
    lift_cmd->add_option("--out", lift_out, "output CSV (t,u,v,sheet)");
    lift_cmd->add_option("--center", center, "center the angle was accumulated about (default 0,0)");
    lift_cmd->add_option("--sheet0", sheet0, "initial sheet");

    // log-continue
    std::string from = "1,0", log_path;
    long sheet = 0;
    auto* log_cmd = app.add_subcommand("log-continue", "continue a germ of log along a path");
    log_cmd->add_option("--from", from, "anchor x,y");
    log_cmd->add_option("--sheet", sheet, "sheet of the initial germ");
    log_cmd->add_option("--path", log_path, "path spec starting at the anchor")->required();

    // verify
    bool deterministic = false;
    int jobs = 1;
    auto* verify_cmd = app.add_subcommand("verify", "run the built-in vortex acceptance suite");
    verify_cmd->add_flag("--deterministic", deterministic, "omit the wall-clock metadata line");
    verify_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kParse;
    }

    if (*forms_cmd) {
        json star = json::array();
        for (const forms::StarRow& r : forms::star_table())
            star.push_back({{"in", forms::basis_name(r.in_degree, r.in_index)},
                            {"out", forms::basis_name(3 - r.in_degree, r.out_index)},
                            {"sign", r.sign}});
        forms::IdentityResiduals res = forms::identity_residuals(samples, seed, fd_step);
        print(out, {{"star", star},
                    {"residuals",
                     {{"star_star", res.star_star},
                      {"cross_product", res.cross_product},
                      {"scalar_product", res.scalar_product},
                      {"curl_grad", res.curl_grad},
                      {"div_curl", res.div_curl},
                      {"step", res.step},
                      {"samples", samples}}}});
        return kOk;
    }
    if (*closed_cmd) {
        ScenarioConfig cfg = closed_sc.resolve();
        Rect r = parse_rect(region);
        json j = closedness_json(is_closed(cfg.field, r, grid, h_fd, tol), r);
        j["field"] = cfg.field.name;
        print(out, j);
        return kOk;
    }
    if (*work_cmd) {
        ScenarioConfig cfg = work_sc.resolve();
        PlanarPath path = parse_path_spec(path_spec);
        Quadrature q = parse_quadrature(quad_spec, segments);
        double w = work(cfg.field, path, q);
        json j = {{"field", cfg.field.name}, {"quadrature", to_string(q)}, {"work", w},
                  {"closed", path.closed()}, {"work_over_2pi", w / kTwoPi}};
        if (path.closed()) {
            json wn = json::array();
            for (Vec2 s : cfg.field.singular_points)
                wn.push_back({{"point", vec(s)}, {"winding", winding_number(path, s).n}});
            j["windings"] = wn;
        }
        print(out, j);
        return kOk;
    }
    if (*winding_cmd) {
        WindingNumber w = winding_number(parse_path_spec(winding_path), parse_point(about));
        print(out, {{"about", vec(parse_point(about))}, {"n", w.n}, {"total_angle", w.total_angle},
                    {"residual", w.residual}});
        return kOk;
    }
    if (*pot_cmd) {
        ScenarioConfig cfg = pot_sc.resolve();
        PotentialSet ps = potentials_for(cfg);
        json values = json::array();
        if (evals.empty())
            for (const Chart& c : cfg.atlas.charts()) evals.push_back(expr::format_double(c.basepoint.x) + "," +
                                                                       expr::format_double(c.basepoint.y) + "@" +
                                                                       std::to_string(c.id));
        for (const std::string& e : evals) {
            auto at = e.find('@');
            Vec2 q = parse_point(e.substr(0, at));
            int chart = 0;
            if (at == std::string::npos) {
                auto c = cfg.atlas.lowest_chart_containing(q);
                if (!c) throw ValidationError("point " + e + " is not covered by the atlas");
                chart = *c;
            } else {
                chart = parse_int_list(e.substr(at + 1)).at(0);
            }
            values.push_back({{"chart", chart}, {"q", vec(q)}, {"V", ps(chart, q)}});
        }
        print(out, {{"field", cfg.field.name}, {"gauges", ps.gauges()}, {"values", values}});
        return kOk;
    }
    if (*coc_cmd) {
        ScenarioConfig cfg = coc_sc.resolve();
        CechCocycle cc = cocycle(potentials_for(cfg), cfg.atlas, overlap_samples, coc_tol);
        json j = cocycle_json(cc);
        j["field"] = cfg.field.name;
        j["exactness"] = exactness_json(exactness_test(cc, coc_tol));
        print(out, j);
        return kOk;
    }
    if (*cls_cmd) {
        ScenarioConfig cfg = cls_sc.resolve();
        std::vector<Rect> rs;
        for (const std::string& r : regions) rs.push_back(parse_rect(r));
        if (rs.empty()) rs = default_probe_regions();
        Classification c = classify(cfg.field, cfg.atlas, rs, cls_grid, cls_h, cls_tol);
        json closedness = json::array();
        for (std::size_t i = 0; i < c.closedness.size(); ++i) closedness.push_back(closedness_json(c.closedness[i], rs[i]));
        json j = {{"field", cfg.field.name}, {"class", to_string(c.kind)}, {"closedness", closedness}};
        if (c.exactness) j["exactness"] = exactness_json(*c.exactness);
        print(out, j);
        return kOk;
    }
    if (*bun_cmd) {
        ScenarioConfig cfg = bun_sc.resolve();
        TransitionSystem ts = transitions(cocycle(potentials_for(cfg), cfg.atlas));
        json tij = json::array();
        for (auto [i, j] : ts.cocycle().edges()) tij.push_back({{"i", i}, {"j", j}, {"t", ts(i, j)}, {"log_t", ts.log(i, j)}});
        TrivialityResult triv = is_trivial(ts);
        json hol = json::array();
        if (cycles.empty()) {
            for (const HolonomyWitness& w : triv.witnesses)
                hol.push_back({{"cycle", cycle_json(w.cycle)}, {"holonomy", w.holonomy}});
        } else {
            for (const std::string& c : cycles) {
                std::vector<int> cyc = parse_int_list(c);
                hol.push_back({{"cycle", cycle_json(cyc)}, {"holonomy", holonomy(ts, cyc)}});
            }
        }
        json gauges = json::object();
        if (triv.trivial)
            for (auto [id, s] : triv.fiber_gauges) gauges[std::to_string(id)] = s;
        print(out, {{"field", cfg.field.name}, {"t_ij", tij}, {"holonomies", hol}, {"trivial", triv.trivial},
                    {"fiber_gauges", gauges}});
        return kOk;
    }
    if (*sim_cmd) {
        ScenarioConfig cfg = sim_sc.resolve();
        sim_flags.apply(cfg);
        return simulate_command(cfg, sim_flags.csv, out, err);
    }
    if (*lift_cmd) return lift_command(traj, lift_out, center, sheet0, out);
    if (*log_cmd) {
        Vec2 a = parse_point(from);
        LogGerm g{{a.x, a.y}, sheet};
        LogGerm r = continue_log(g, parse_path_spec(log_path));
        print(out, {{"start", germ_json(g)}, {"end", germ_json(r)}});
        return kOk;
    }
    if (*verify_cmd) return run_verify(out, deterministic, jobs);
    return kValidation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Locally conservative force fields: forms, atlases, cocycles, dynamics and cover lifts", "locons"};
    try {
        return dispatch(app, args, out, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParse;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }
}

}  // namespace locons::cli
