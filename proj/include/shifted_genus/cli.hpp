#pragma once

// Command implementations behind the shifted-genus executable. Each command
// returns its stdout text and an exit code so it can be driven from tests.

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shifted_genus/class_number.hpp"
#include "shifted_genus/errors.hpp"
#include "shifted_genus/form_spec.hpp"
#include "shifted_genus/lattice.hpp"

namespace shifted_genus::cli {

enum exit_code : int { ok = 0, parse_failure = 2, precision_failure = 3, domain_failure = 4, internal_failure = 5 };

struct result {
    int code = ok;
    std::string out;
    std::string err;
};

using json = nlohmann::ordered_json;

inline json to_json(const padic_matrix& m)
{
    return json::array({json::array({m[0].to_string(), m[1].to_string()}),
                        json::array({m[2].to_string(), m[3].to_string()})});
}

inline json to_json(const beta_value& b)
{
    return {{"value", to_string(b.value)}, {"method", to_string(b.method)}, {"t_used", b.t_used}};
}

inline json to_json(const class_number_breakdown& r)
{
    json locals = json::array();
    for (const auto& d : r.locals) {
        json l = {{"p", d.form.p},
                  {"kind", static_cast<int>(d.form.kind)},
                  {"t_m", d.shift.t_m},
                  {"s1", d.shift.s1.to_string()},
                  {"s2", d.shift.s2.to_string()},
                  {"beta_L", to_json(d.report.beta_L)},
                  {"beta_X", to_json(d.report.beta_X)},
                  {"index", d.report.index},
                  {"method", to_string(d.report.method)},
                  {"t_used", d.report.t_used}};
        locals.push_back(std::move(l));
    }
    return {{"gram", {r.gram.a11, r.gram.a12, r.gram.a22}},
            {"content", r.content},
            {"shift", {to_string(r.shift[0]), to_string(r.shift[1])}},
            {"norm_M", r.norm_M},
            {"h_L", r.h_L},
            {"aut_L", r.aut_L},
            {"stab_index", r.stab_index},
            {"local", locals},
            {"h_X", r.h_X},
            {"closed_expression_applicable", r.closed_applicable},
            {"closed_expression_value", r.closed_value ? json(to_string(*r.closed_value)) : json(nullptr)},
            {"I_X", r.I_X},
            {"beta2", to_string(r.beta2)}};
}

/// Map exceptions onto exit codes.
template <class F>
result guarded(F&& body)
{
    try {
        return body();
    } catch (const parse_error& e) {
        return {parse_failure, {}, std::string("parse error ") + e.what()};
    } catch (const insufficient_precision& e) {
        return {precision_failure, {}, std::string("precision: ") + e.what()};
    } catch (const not_positive_definite& e) {
        return {domain_failure, {}, std::string("domain: ") + e.what()};
    } catch (const bad_discriminant& e) {
        return {domain_failure, {}, std::string("domain: ") + e.what()};
    } catch (const invariant_breach& e) {
        return {internal_failure, {}, std::string("invariant breach: ") + e.what()};
    } catch (const not_stabilized& e) {
        return {internal_failure, {}, std::string("not stabilized: ") + e.what()};
    } catch (const std::invalid_argument& e) {
        return {parse_failure, {}, std::string("invalid argument: ") + e.what()};
    }
}

inline result jordan(const std::string& form, std::int64_t p)
{
    return guarded([&]() -> result {
        const gram_matrix g = parse_gram(form);
        if (!is_prime(p))
            throw parse_error(0, "p=" + std::to_string(p) + " is not prime");
        const auto F = with_precision_retry(p, default_precision(g, p, 1),
                                            [&](int N) { return jordan_form(g, p, N); });
        json j = {{"p", p},
                  {"kind", static_cast<int>(F.kind)},
                  {"c", F.c.to_string()},
                  {"alpha", F.kind == jordan_kind::hyperbolic ? json(nullptr) : json(F.alpha.to_string())},
                  {"beta", F.kind == jordan_kind::even ? json(F.beta.to_string()) : json(nullptr)},
                  {"U", to_json(F.U)},
                  {"precision", F.precision}};
        return {ok, j.dump(2) + "\n", {}};
    });
}

inline result classnumber(const std::string& form, const std::string& shift, bool with_audit)
{
    return guarded([&]() -> result {
        const auto X = parse_shifted_lattice(form, shift);
        const auto r = class_number(X);
        json j = to_json(r);
        if (with_audit) {
            json checks = json::array();
            for (const auto& a : audit(r))
                checks.push_back({{"p", a.p},
                                  {"beta_L_oracle", to_string(a.beta_L_oracle)},
                                  {"beta_X_oracle", to_string(a.beta_X_oracle)},
                                  {"index_oracle", a.index_oracle},
                                  {"agrees", a.agrees}});
            const json closed_agrees = r.closed_value ? json(*r.closed_value == rational(r.h_X)) : json(nullptr);
            j["audit"] = {{"local", checks}, {"closed_expression_agrees", closed_agrees}};
        }
        return {ok, j.dump(2) + "\n", {}};
    });
}

inline result growth(const std::string& form, std::int64_t max_m, const std::string& family)
{
    return guarded([&]() -> result {
        const gram_matrix g = parse_gram(form);
        if (family != "axis")
            throw parse_error(0, "unknown shift family '" + family + "' (supported: axis)");
        if (max_m < 1)
            throw parse_error(0, "--max-m must be >= 1");
        std::vector<std::int64_t> ms;
        for (std::int64_t m = 1; m <= max_m; ++m)
            ms.push_back(m);
        std::ostringstream os;
        os << "m,norm_conductor,h_plus\n";
        for (const auto& row : growth_table(g, ms))
            os << row.m << "," << row.norm_M << "," << row.h_X << "\n";
        return {ok, os.str(), {}};
    });
}

inline result search(const std::string& form, std::int64_t h, std::int64_t max_m)
{
    return guarded([&]() -> result {
        const gram_matrix g = parse_gram(form);
        if (!g.positive_definite())
            throw not_positive_definite("Gram matrix is not positive definite");
        json list = json::array();
        for (const auto& hit : search_fixed_h(g, h, max_m))
            list.push_back({{"shift", {to_string(hit.shift[0]), to_string(hit.shift[1])}},
                            {"conductor", hit.conductor},
                            {"h_plus", hit.h_X}});
        return {ok, list.dump(2) + "\n", {}};
    });
}

} // namespace shifted_genus::cli
