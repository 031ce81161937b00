// shifted-genus: class numbers of shifted binary lattices from the command line.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "shifted_genus/cli.hpp"

namespace sgc = shifted_genus::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Proper class numbers of positive definite shifted binary lattices"};
    app.require_subcommand(1);
    // "--h" is an option of search, so help is long-form only.
    app.set_help_flag("--help", "print this help and exit");

    std::string form;
    std::string shift;
    std::int64_t p = 0;
    bool audit = false;
    std::int64_t max_m = 0;
    std::string family = "axis";
    std::int64_t h = 0;

    auto* jordan = app.add_subcommand("jordan", "Jordan form of the lattice at a prime (JSON)");
    jordan->add_option("form", form, "Gram entries a11,a12,a22")->required();
    jordan->add_option("-p,--prime", p, "prime")->required();

    auto* classnumber = app.add_subcommand("classnumber", "class number breakdown of L + nu (JSON)");
    classnumber->add_option("form", form, "Gram entries a11,a12,a22")->required();
    classnumber->add_option("shift", shift, "shift n1/d1,n2/d2")->required();
    classnumber->add_flag("--audit", audit, "re-derive every local factor by counting");

    auto* growth = app.add_subcommand("growth", "class numbers along a shift family (CSV)");
    growth->add_option("form", form, "Gram entries a11,a12,a22")->required();
    growth->add_option("--max-m", max_m, "largest conductor")->required();
    growth->add_option("--shift-family", family, "shift family (axis: nu = (1/m, 0))");

    auto* search = app.add_subcommand("search", "shift orbits with a given class number (JSON)");
    search->set_help_flag("--help", "print this help and exit");
    search->add_option("form", form, "Gram entries a11,a12,a22")->required();
    search->add_option("--h", h, "class number")->required();
    search->add_option("--max-m", max_m, "largest conductor")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : sgc::parse_failure;
    }

    sgc::result r;
    try {
        if (*jordan)
            r = sgc::jordan(form, p);
        else if (*classnumber)
            r = sgc::classnumber(form, shift, audit);
        else if (*growth)
            r = sgc::growth(form, max_m, family);
        else
            r = sgc::search(form, h, max_m);
    } catch (const std::exception& e) {
        r = {sgc::internal_failure, {}, std::string("internal error: ") + e.what()};
    }
    std::cout << r.out;
    if (!r.err.empty())
        std::cerr << "shifted-genus: " << r.err << "\n";
    return r.code;
}
