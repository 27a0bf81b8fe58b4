#pragma once

#include "besov/capacity.hpp"
#include "besov/capacity_suite.hpp"
#include "besov/common.hpp"
#include "besov/compare.hpp"
#include "besov/content.hpp"
#include "besov/content_suite.hpp"
#include "besov/generate.hpp"
#include "besov/gradient.hpp"
#include "besov/gradient_suite.hpp"
#include "besov/io.hpp"
#include "besov/lp.hpp"
#include "besov/median.hpp"
#include "besov/median_suite.hpp"
#include "besov/oracle.hpp"
#include "besov/oracle_suite.hpp"
#include "besov/report.hpp"
#include "besov/space.hpp"
#include "besov/verify.hpp"
