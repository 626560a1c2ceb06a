import streamlit as st
import pandas as pd

from fixtures import EXAMPLE_BUILDERS, registry, run_fixture
from report import FAIL, INCONCLUSIVE, PASS, SKIPPED, reports_to_excel

# ===============================
# PAGE CONFIG
# ===============================
st.set_page_config(page_title="Quasi-Poisson Checks", layout="wide")
st.title("🧮 Quasi-Poisson Checks")

# ===============================
# INPUTS
# ===============================
fixtures = {f.name: f for f in registry()}
chosen = st.multiselect("Select Examples", list(EXAMPLE_BUILDERS.keys()), default=["abelian-r2"])
slow = st.checkbox("Run slow checks", value=False)

if not chosen:
    st.stop()

for name in chosen:
    st.caption(f"{name}: {fixtures[name].description}")

if not st.button("Run"):
    st.stop()

# ===============================
# RUN PER FIXTURE
# ===============================
reports = []

for name in chosen:
    with st.spinner(f"Checking {name} ..."):
        try:
            report = run_fixture(name, slow=slow, quiet=True)
        except Exception as exc:
            st.error(f"⚠ {name}: {exc}")
            continue
    reports.append(report)

    if report.ok:
        st.success(f"✔ {name}: {len(report)} checks")
    else:
        st.warning(f"⚠ {name}: {len(report.failures())} failing checks")

if not reports:
    st.stop()

# ===============================
# DISPLAY DATA
# ===============================
st.subheader("📄 Check Outcomes")
for report in reports:
    with st.expander(report.title):
        st.dataframe(report.to_frame(), use_container_width=True)

# ===============================
# SUMMARY TABLE
# ===============================
rows = []

for report in reports:
    df = report.to_frame()
    counts = df["status"].value_counts()
    rows.append({
        "Example": report.title,
        "Checks": len(df),
        "Pass": int(counts.get(PASS, 0)),
        "Fail": int(counts.get(FAIL, 0)),
        "Inconclusive": int(counts.get(INCONCLUSIVE, 0)),
        "Skipped": int(counts.get(SKIPPED, 0)),
        "Seconds": round(df["elapsed"].sum(), 2),
    })

summary_df = pd.DataFrame(rows)

st.subheader("📅 Summary Table")
st.dataframe(summary_df, use_container_width=True)

# ===============================
# EXCEL EXPORT
# ===============================
bio = reports_to_excel(reports)

st.download_button(
    "⬇ Download Reports (Excel)",
    data=bio,
    file_name="Quasi_Poisson_Checks.xlsx",
    mime="application/vnd.openxmlformats-officedocument.spreadsheetml.sheet"
)
