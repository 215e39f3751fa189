// Acceptance runner: one line per criterion, nonzero exit if any fails.
//   scd_acceptance            all criteria
//   scd_acceptance 3 5        only these

#include <cstdlib>
#include <iostream>

#include "scd/verify.hpp"

int main(int argc, char** argv)
{
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i)
        ids.push_back(std::atoi(argv[i]));
    if (ids.empty())
        for (int i = 1; i <= scd::criterion_count; ++i)
            ids.push_back(i);

    bool all = true;
    for (int id : ids)
    {
        auto r = scd::run_criterion(id);
        std::cout << scd::summary_line(r) << std::endl;
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
