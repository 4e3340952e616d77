"""
Auditing the spacetime schedule
===============================

The delayed-choice trick only binds if the reveal happens outside the
light cone of the commitment events.  Build the canonical schedule,
audit it, stretch the commitment arbitrarily, then tamper with one
message and watch the auditor flag it.
"""

import dataclasses

from relcommit.spacetime import audit, light_travel_time, standard_schedule

# Canonical one-dimensional layout: receiver at 0, the swap station at
# x, the committer at 2x.  With x = 1 light-second and c = 1, every
# classical or quantum message needs at least a second per leg.
x, c = 1.0, 1.0
schedule = standard_schedule(x, c, T=10.0, scheme="single")
print(f"one leg takes {light_travel_time(0.0, x, c):.1f} time units")
print(f"{len(schedule.events)} events, {len(schedule.messages)} messages")

report = audit(schedule)
print(f"audit ok: {report.ok}")
print()

# The commitment can stay open as long as the parties like: binding
# comes from the stored confirmation bit, not from racing light.
for factor in (2.0, 1e3, 1e9):
    long_schedule = standard_schedule(x, c, T=factor * x / c, scheme="single")
    print(f"reveal at T = {factor:>12.0e} x/c: audit ok = {audit(long_schedule).ok}")
print()

# But a reveal before both sides could have finished storing is
# rejected outright: there is nothing yet to bind the announcement to.
try:
    standard_schedule(x, c, T=1.5, scheme="single")
except ValueError as error:
    print(f"T = 1.5 x/c rejected: {error}")
print()

# Tamper with the classical outcome broadcast so it lands too early,
# as if the receiver learned the swap result faster than light.
messages = list(schedule.messages)
for k, message in enumerate(messages):
    if message.channel == "classical":
        hurried = dataclasses.replace(
            message, arrival_time=message.send_time + 0.4 * (x / c)
        )
        messages[k] = hurried
        print(f"moving the {message.sender} -> {message.receiver} broadcast arrival "
              f"from {message.arrival_time:.2f} to {hurried.arrival_time:.2f}")
        break

tampered = dataclasses.replace(schedule, messages=tuple(messages))
report = audit(tampered)
print(f"audit ok: {report.ok}")
for violation in report.violations:
    print(f"  {violation.kind}: {violation.subject}: {violation.detail}")
