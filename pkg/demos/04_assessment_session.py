"""Walking through an elicitation session, question by question.

The protocol asks one certainty-equivalent lottery per attribute (pinning
the risk coefficient), then one indifference-probability question per
attribute (read directly as the scaling constant).  This demo scripts a
mildly risk-averse designer and shows every prompt and answer.
"""

from maud import finalize_profile, next_question, start_session, submit_answer
from maud.documents import attributes_from_document, profile_fingerprint
from maud.fixtures import bumper_attributes_document

attributes = attributes_from_document(bumper_attributes_document())
session = start_session(attributes)

# scripted answers: sure levels somewhat worse than the midpoints (risk
# aversion), then importance probabilities for the corner lotteries
scripted = [340.0, 100.0, 3.4, 3.6, 0.56, 0.06, 0.23, 0.12]

for answer in scripted:
    question = next_question(session)
    print(f"Q{question.index + 1} [{question.kind}] {question.prompt}")
    print(f"   -> answer: {answer}\n")
    session = submit_answer(session, answer)

profile = finalize_profile(session)
print("resulting profile:")
for u, k in zip(profile.utilities, profile.scaling_constants):
    print(f"  {u.attribute.id:<11} risk coefficient c = {u.risk_coefficient:+.4f}"
          f"   scaling constant k = {k}")
print(f"  master constant K = {profile.master_constant:.6f}"
      f"  ({profile.aggregation_mode.value})")
print(f"  fingerprint: {profile_fingerprint(profile)[:16]}...")
