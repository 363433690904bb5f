#!/usr/bin/env python3
"""Writes the golden prompt files and their inputs.

Kept separate from the C++ prompt builder on purpose: the instruction text is
typed out here a second time and the context window is cut by list slicing,
so a slip on either side shows up as a byte mismatch.
"""
import json
import pathlib

HERE = pathlib.Path(__file__).resolve().parent

GUN = (
    "We have 5 visualizations generated from the data.The first plot is a time series of gun "
    "violence incidents over time from Feb 2013 to March 2018. The y-axis is the number of "
    "incidents, and the x-axis is the time period. The second plot is a bar chart of gun violence "
    "incident counts per state. The y-axis represents the number of incidents, and the x-axis has "
    "the states sorted high-to-low in incident counts. The third plot is a stacked bar chart of "
    "injured and killed people by each state. The two variables are the number of people injured "
    "and the number of people killed. The y-axis is the victim count, and the x-axis has the states "
    "sorted in alphabetical order. The fourth plot is a stacked bar chart of victim counts by gender "
    "by each state. The two variables are male and female victim counts. The y-axis is the victim "
    "count, and the x-axis has the states sorted in alphabetical order. The fifth plot is a stacked "
    "bar chart of children and teen victim counts by each state. The two variables are children and "
    "teen victim counts. The y-axis is the victim count, and the x-axis has the states sorted in "
    "alphabetical order."
)

CLIMATE = (
    "We have 3 visualizations generated from the data. The first plot is a line chart of global "
    "mean surface temperature anomalies from 1880 to 2020. The second plot is a bar chart of carbon "
    "dioxide emissions per country in 2019, sorted high-to-low. The third plot is a map of sea level "
    "change along coastlines between 1993 and 2020."
)

COVID = (
    "We have 4 visualizations generated from the data. The first plot is a time series of daily "
    "confirmed cases from March 2020 to December 2021. The second plot is a bar chart of hospital "
    "admissions per state. The third plot is a stacked bar chart of vaccine doses by age group. "
    "The fourth plot is a line chart of weekly deaths per 100,000 residents."
)

SOCRATIC = (
    "Based on the text above, ask four Socratic questions on what has not yet been addressed in the "
    "writing. Socratic questions lead to exploring complex ideas, uncovering assumptions, and "
    "analyzing concepts. Examples of Socratic questions include: 'What are the alternative "
    "explanations for the trend of increasing gun violence incident counts', 'What are the "
    "implications of discrepancy in energy consumption profiles?', or 'What evidence supports the "
    "claim of weather conditions contributing to road safety?'. Please ask four questions in the "
    "following format: 1. [QUESTION 1] 2. [QUESTION 2] 3. [QUESTION 3] 4. [QUESTION 4]"
)

AUTOCOMPLETE = (
    "Based on this context, suggest next sentences in the following format: 1. [SENTENCE1] "
    "2. [SENTENCE2] 3. [SENTENCE] 4. [SENTENCE]"
)

TWELVE = [f"Sentence number {i} talks about trend {i}." for i in range(1, 13)]

FIXTURES = [
    ("socratic_gun_empty", "socratic", GUN, []),
    ("socratic_gun_two", "socratic", GUN,
     ["Gun violence rose steadily after 2014.", "Illinois reports the most incidents."]),
    ("socratic_climate_twelve", "socratic", CLIMATE, TWELVE),
    ("autocomplete_climate_empty", "autocomplete", CLIMATE, []),
    ("autocomplete_covid_one", "autocomplete", COVID,
     ["Hospital admissions peaked in January 2021."]),
    ("autocomplete_gun_twelve", "autocomplete", GUN, TWELVE),
]


def build(mode, prose, sentences):
    window = sentences[-10:]
    context = " ".join(window)
    prompt = "Analyze the following data: " + prose + "\n\n"
    if context:
        prompt += context + " "
    prompt += SOCRATIC if mode == "socratic" else AUTOCOMPLETE
    return prompt


def main():
    index = []
    for name, mode, prose, sentences in FIXTURES:
        (HERE / f"{name}.txt").write_bytes(build(mode, prose, sentences).encode("utf-8"))
        index.append({"name": name, "mode": mode, "prose": prose,
                      "document": " ".join(sentences)})
    (HERE / "fixtures.json").write_text(json.dumps(index, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
