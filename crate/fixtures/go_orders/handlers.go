package main

import (
	"encoding/json"
	"net/http"
)

// HandleCreateOrder decodes an order, prices it and stores it.
func (s *OrderStore) HandleCreateOrder(w http.ResponseWriter, r *http.Request) {
	var order Order
	if err := json.NewDecoder(r.Body).Decode(&order); err != nil {
		http.Error(w, err.Error(), http.StatusBadRequest)
		return
	}
	if order.Quantity <= 0 {
		http.Error(w, "quantity must be positive", http.StatusBadRequest)
		return
	}
	order.Total = float64(order.Quantity) * 19.99
	s.save(&order)
	w.WriteHeader(http.StatusCreated)
	json.NewEncoder(w).Encode(order)
}
