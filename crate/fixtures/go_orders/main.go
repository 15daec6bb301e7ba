package main

import (
	"log"
	"net/http"
	"sync"
)

// Order is a placed order.
type Order struct {
	ID       int     `json:"id"`
	SKU      string  `json:"sku"`
	Quantity int     `json:"quantity"`
	Total    float64 `json:"total"`
}

// OrderStore keeps orders in memory.
type OrderStore struct {
	mu     sync.Mutex
	orders []Order
}

func NewOrderStore() *OrderStore {
	return &OrderStore{}
}

func (s *OrderStore) save(order *Order) {
	s.mu.Lock()
	defer s.mu.Unlock()
	order.ID = len(s.orders) + 1
	s.orders = append(s.orders, *order)
}

func main() {
	store := NewOrderStore()
	http.HandleFunc("/orders", store.HandleCreateOrder)
	log.Fatal(http.ListenAndServe(":8080", nil))
}
