#pragma once

#include "primedisc/asymptotics.hpp"
#include "primedisc/discrepancy.hpp"
#include "primedisc/errors.hpp"
#include "primedisc/modmath.hpp"
#include "primedisc/parallel.hpp"
#include "primedisc/primes.hpp"
#include "primedisc/rational.hpp"
#include "primedisc/report.hpp"
#include "primedisc/sequences.hpp"
